"""Geometry of the partially-connected hybrid array.

A base station array of ``n_total`` elements is split into ``n_chains``
disjoint uniform linear sub-arrays of ``n_per_sub`` elements, one RF chain
each.  Element spacing is expressed in wavelengths, so the carrier frequency
never enters the phase computation.  All angles are planar bearings in
radians, wrapped to [0, 2*pi).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi


def normalize_angle(theta: float) -> float:
    """Wrap an angle in radians to [0, 2*pi)."""
    wrapped = float(np.mod(theta, TWO_PI))
    # np.mod can return 2*pi for tiny negative inputs
    return 0.0 if wrapped >= TWO_PI else wrapped


@dataclass(frozen=True)
class ArrayLayout:
    """Hybrid array geometry: ``n_chains`` sub-arrays of ``n_per_sub`` elements.

    ``spacing`` is the inter-element spacing in wavelengths (default half
    wavelength).
    """

    n_total: int
    n_chains: int
    n_per_sub: int
    spacing: float = 0.5

    def __post_init__(self) -> None:
        if self.n_chains < 1 or self.n_per_sub < 1:
            raise ValueError("n_chains and n_per_sub must both be >= 1")
        if self.n_per_sub * self.n_chains != self.n_total:
            raise ValueError(
                f"n_per_sub ({self.n_per_sub}) * n_chains ({self.n_chains}) "
                f"must equal n_total ({self.n_total})"
            )
        if not self.spacing > 0:
            raise ValueError("spacing must be > 0 wavelengths")

    @classmethod
    def split(cls, n_total: int, n_chains: int, spacing: float = 0.5) -> "ArrayLayout":
        """Build a layout from totals; fails when the split is not integral."""
        if n_chains < 1:
            raise ValueError("n_chains must be >= 1")
        if n_total % n_chains != 0:
            raise ValueError(
                f"n_total ({n_total}) is not divisible by n_chains ({n_chains}); "
                "elements per sub-array must be an integer"
            )
        return cls(n_total, n_chains, n_total // n_chains, spacing)


def element_phase(layout: ArrayLayout, element_index: int, theta: float) -> float:
    """Propagation phase of one sub-array element relative to its reference.

    ``element_index`` is 1-based within the sub-array.  With spacing in
    wavelengths the phase is ``2*pi*spacing*(element_index-1)*sin(theta)``.
    """
    if not 1 <= element_index <= layout.n_per_sub:
        raise ValueError(
            f"element_index {element_index} outside [1, {layout.n_per_sub}]"
        )
    return TWO_PI * layout.spacing * (element_index - 1) * np.sin(theta)


def steering_vector(layout: ArrayLayout, theta: float) -> np.ndarray:
    """Unit-modulus steering vector of one sub-array toward ``theta``.

    Identical for every sub-array: each is referenced to its own first
    element, and inter-sub-array offsets are absorbed into the channel
    coefficients.
    """
    n = np.arange(layout.n_per_sub)
    return np.exp(1j * TWO_PI * layout.spacing * n * np.sin(theta))


def steering_matrix(layout: ArrayLayout, thetas: np.ndarray) -> np.ndarray:
    """Steering vectors for several angles, stacked as rows (D, n_per_sub)."""
    n = np.arange(layout.n_per_sub)
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    return np.exp(1j * TWO_PI * layout.spacing * np.outer(np.sin(thetas), n))


def beam_pattern(layout: ArrayLayout, weights: np.ndarray, theta: float) -> complex:
    """Complex array response a^H(theta) . w of one sub-array's weights."""
    weights = np.asarray(weights)
    if weights.shape != (layout.n_per_sub,):
        raise ValueError(
            f"weights must have length {layout.n_per_sub}, got shape {weights.shape}"
        )
    return complex(np.vdot(steering_vector(layout, theta), weights))


def beam_pattern_matrix(
    layout: ArrayLayout, weights: np.ndarray, thetas: np.ndarray
) -> np.ndarray:
    """Pattern values for several beams at several angles.

    ``weights`` is (n_beams, n_per_sub); the result is (n_beams, n_angles)
    with entry [m, d] = a^H(theta_d) . w_m.
    """
    a = steering_matrix(layout, thetas)  # (D, N_s)
    return np.asarray(weights) @ a.conj().T


def angle_of(bs_position, target_position) -> float:
    """Planar bearing of ``target_position`` seen from ``bs_position``."""
    dx = float(target_position[0]) - float(bs_position[0])
    dy = float(target_position[1]) - float(bs_position[1])
    if dx == 0.0 and dy == 0.0:
        raise ValueError("cannot compute a bearing between coincident points")
    return normalize_angle(np.arctan2(dy, dx))
