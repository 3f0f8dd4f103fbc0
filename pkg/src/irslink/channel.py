"""Stochastic channel generation.

Small-scale fading is frequency-flat: Rayleigh on the base-station/user and
surface/user links, Rician on the base-station/surface link.  Large-scale
gain on the scattered links follows a modified COST-Hata law in dB with
lognormal shadowing; the surface link uses a free-space-style loss from a
1 m reference.  Thermal noise power comes from bandwidth, temperature and
receiver noise figure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

BOLTZMANN_J_PER_K = 1.380649e-23

# Path-loss distances are clamped below this to keep gains bounded for users
# drawn arbitrarily close to a terminal.
MIN_LINK_DISTANCE_M = 10.0


@dataclass(frozen=True)
class LargeScaleParams:
    """Large-scale propagation constants.

    ``nlos_distance_unit`` selects whether the scattered-link law is
    evaluated with the distance in kilometers (default) or meters; see the
    scenario documentation for why km reproduces the reference link budget.
    """

    nlos_intercept_db: float = -166.0  # gain at reference distance
    nlos_slope: float = 35.0           # dB per decade
    shadowing_std_db: float = 8.0
    los_ref_loss_db: float = 60.0      # loss at 1 m
    los_exponent: float = 2.0
    rician_factor: float = 5.0         # linear power ratio
    nlos_distance_unit: str = "km"

    def __post_init__(self) -> None:
        if self.shadowing_std_db < 0:
            raise ValueError("shadowing_std_db must be >= 0")
        if self.rician_factor < 0:
            raise ValueError("rician_factor must be >= 0")
        if not self.los_exponent > 0:
            raise ValueError("los_exponent must be > 0")
        if self.nlos_distance_unit not in ("m", "km"):
            raise ValueError("nlos_distance_unit must be 'm' or 'km'")


@dataclass(frozen=True)
class NoiseParams:
    bandwidth_hz: float = 2.0e7
    temperature_k: float = 290.0
    noise_figure_db: float = 9.0
    boltzmann: float = BOLTZMANN_J_PER_K

    def __post_init__(self) -> None:
        for name in ("bandwidth_hz", "temperature_k", "boltzmann"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")


@dataclass(frozen=True)
class ChannelRealization:
    """One fading draw for a drop.

    ``direct`` holds the sub-array-reference coefficients to each user
    (n_chains, n_users); ``bs_irs`` the coefficients to each reflecting
    element (n_chains, n_elements); ``irs_ue`` the element-to-user links
    (n_elements, n_users).
    """

    direct: np.ndarray
    bs_irs: np.ndarray
    irs_ue: np.ndarray

    def __post_init__(self) -> None:
        for name in ("direct", "bs_irs", "irs_ue"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise ValueError(f"non-finite entries in {name}")
        m1, k1 = self.direct.shape
        m2, n1 = self.bs_irs.shape
        n2, k2 = self.irs_ue.shape
        if m1 != m2 or n1 != n2 or k1 != k2:
            raise ValueError(
                f"inconsistent dimensions: direct {self.direct.shape}, "
                f"bs_irs {self.bs_irs.shape}, irs_ue {self.irs_ue.shape}"
            )


def noise_power(params: NoiseParams) -> float:
    """Thermal noise power in watts: b * B_w * T_0 * 10^(F_n/10)."""
    return (
        params.boltzmann
        * params.bandwidth_hz
        * params.temperature_k
        * 10.0 ** (params.noise_figure_db / 10.0)
    )


def nlos_gain_db(
    params: LargeScaleParams, distance_m: float, shadowing_db: float = 0.0
) -> float:
    """Scattered-link power gain in dB at ``distance_m`` plus a shadowing draw."""
    if not distance_m > 0:
        raise ValueError("distance must be > 0")
    d = distance_m / 1000.0 if params.nlos_distance_unit == "km" else distance_m
    return params.nlos_intercept_db - params.nlos_slope * np.log10(d) + shadowing_db


def los_loss_db(params: LargeScaleParams, distance_m: float) -> float:
    """Line-of-sight path loss in dB from a 1 m reference."""
    if distance_m < 1.0:
        raise ValueError("distance below the 1 m reference")
    return params.los_ref_loss_db + 10.0 * params.los_exponent * np.log10(distance_m)


def draw_rayleigh(rng: np.random.Generator, variance: float, size=None):
    """Zero-mean circularly symmetric complex Gaussian of total power ``variance``."""
    if variance < 0:
        raise ValueError("variance must be >= 0")
    scale = np.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(size) + 1j * rng.standard_normal(size))


def draw_rician(
    rng: np.random.Generator, total_power: float, rician_factor: float, size=None
):
    """Rician draw: deterministic part of power total*k/(1+k), scattered remainder.

    The deterministic component's phase is uniform, drawn once per call (one
    call covers one element pair and drop).
    """
    if total_power < 0 or rician_factor < 0:
        raise ValueError("total_power and rician_factor must be >= 0")
    los_power = total_power * rician_factor / (1.0 + rician_factor)
    scatter_power = total_power / (1.0 + rician_factor)
    phase = rng.uniform(0.0, 2.0 * np.pi, size)
    los = np.sqrt(los_power) * np.exp(1j * phase)
    return los + draw_rayleigh(rng, scatter_power, size)


def generate_channels(scenario, drop, rng: np.random.Generator) -> ChannelRealization:
    """Draw one full channel realization for ``drop``.

    Shadowing is drawn once per (user, link class); the draw order is fixed
    (direct shadowing, surface-link shadowing, direct fading, surface fading,
    element-to-user fading) so a given stream always yields the same
    realization.
    """
    m = scenario.array.n_chains
    n = scenario.n_irs_elements
    k = scenario.n_users
    ls = scenario.large_scale
    if drop.positions.shape[0] != k:
        raise ValueError(
            f"drop has {drop.positions.shape[0]} users, scenario expects {k}"
        )

    shadow_direct = rng.normal(0.0, ls.shadowing_std_db, k)
    shadow_surface = rng.normal(0.0, ls.shadowing_std_db, k)

    d_bs = np.maximum(drop.bs_distances, MIN_LINK_DISTANCE_M)
    d_irs = np.maximum(drop.irs_distances, MIN_LINK_DISTANCE_M)
    var_direct = np.array(
        [10.0 ** (nlos_gain_db(ls, d, x) / 10.0) for d, x in zip(d_bs, shadow_direct)]
    )
    var_surface = np.array(
        [10.0 ** (nlos_gain_db(ls, d, x) / 10.0) for d, x in zip(d_irs, shadow_surface)]
    )

    direct = draw_rayleigh(rng, 1.0, (m, k)) * np.sqrt(var_direct)[None, :]

    d_bs_irs = float(np.hypot(
        scenario.irs_position[0] - scenario.bs_position[0],
        scenario.irs_position[1] - scenario.bs_position[1],
    ))
    if n > 0:
        surface_power = 10.0 ** (-los_loss_db(ls, d_bs_irs) / 10.0)
        bs_irs = draw_rician(rng, surface_power, ls.rician_factor, (m, n))
        irs_ue = draw_rayleigh(rng, 1.0, (n, k)) * np.sqrt(var_surface)[None, :]
    else:
        bs_irs = np.zeros((m, 0), dtype=complex)
        irs_ue = np.zeros((0, k), dtype=complex)

    return ChannelRealization(direct=direct, bs_irs=bs_irs, irs_ue=irs_ue)
