"""Multiple-access schemes over one channel realization.

Four schemes map a (user drop, channel realization) pair to per-user and sum
spectral efficiency:

* ``bdma`` — one beam per sub-array on the full time-frequency resource; the
  first sub-array points at the reflecting surface to serve the slot's far
  user, the rest form direct beams at near users.
* ``tdma`` — one user at a time with the full power budget and a 1/K time
  share; the surface is re-phased for every active user.
* ``fdma`` — per-user sub-bands (1/K bandwidth and power, 1/K noise); same
  spatial setup as TDMA, but the surface phases are frozen for the whole
  frame at the selected leader's optimum since the reflection cannot be
  frequency-selective.
* ``noma`` — all chains carry the same K-signal superposition on the full
  resource; receivers run successive interference cancellation ordered by
  effective channel magnitude.

Every user's received signal is the sum over sub-arrays of a reflected path
(through the surface, weighted by each beam's gain toward the surface) and a
direct path (weighted by the beam's gain toward the user).  Schemes differ
only in beam targets, surface phases, power split, and resource shares.

``sidelobe_model`` selects how beam-pattern values enter the evaluation:
``"exact"`` uses the true array response of the matched weights everywhere,
``"idealized"`` keeps only each beam's mainlobe gain (off-target values are
zeroed), the perfectly-selective regime in which beam-division access has no
inter-user interference.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .beamforming import IrsConfig, cophase_with_direct, matched_weights, optimal_irs_phases
from .channel import ChannelRealization
from .geometry import ArrayLayout, beam_pattern, beam_pattern_matrix

SCHEME_TAGS = ("bdma", "tdma", "fdma", "noma")
SIDELOBE_MODELS = ("exact", "idealized")


@dataclass(frozen=True)
class UserDrop:
    """One user placement: positions, bearings, distances and categorization."""

    positions: np.ndarray        # (K, 2) meters
    bs_angles: np.ndarray        # (K,) radians, bearings from the BS
    irs_angle: float             # bearing of the surface from the BS
    bs_distances: np.ndarray     # (K,) meters
    irs_distances: np.ndarray    # (K,) meters from the surface
    far_set: tuple[int, ...]
    near_set: tuple[int, ...]

    def __post_init__(self) -> None:
        k = self.positions.shape[0]
        far = set(self.far_set)
        near = set(self.near_set)
        if far & near:
            raise ValueError("far_set and near_set overlap")
        if far | near != set(range(k)):
            raise ValueError("far_set and near_set must partition the users")

    @property
    def n_users(self) -> int:
        return self.positions.shape[0]


@dataclass(frozen=True)
class UserGroup:
    """Users served together in one slot; a far leader comes first if present."""

    members: tuple[int, ...]
    slot_index: int

    def __post_init__(self) -> None:
        if len(set(self.members)) != len(self.members):
            raise ValueError("group members must be distinct")


@dataclass(frozen=True)
class TxConfig:
    """Per-slot transmit state used by a scheme runner."""

    weights: np.ndarray          # (n_streams, n_per_sub)
    irs: IrsConfig
    per_stream_power: float      # watts
    resource_fraction: float     # share of the time-frequency resource

    def __post_init__(self) -> None:
        if not 0.0 < self.resource_fraction <= 1.0:
            raise ValueError("resource_fraction must be in (0, 1]")

    def check_power(self, total_power: float) -> None:
        if self.per_stream_power * self.weights.shape[0] > total_power + 1e-9:
            raise ValueError("per-stream powers exceed the transmit budget")


@dataclass(frozen=True)
class SchemeOutcome:
    scheme_tag: str
    per_user_se: np.ndarray      # (K,) bps/Hz
    sum_se: float

    def __post_init__(self) -> None:
        if np.any(self.per_user_se < 0):
            raise ValueError("negative per-user spectral efficiency")
        if abs(self.sum_se - float(np.sum(self.per_user_se))) > 1e-9:
            raise ValueError("sum_se does not match the per-user values")


def categorize_users(
    positions: np.ndarray, edge_square, policy: str = "by_region"
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split users into far (cell-edge square) and near (everyone else)."""
    if policy != "by_region":
        raise ValueError(f"unknown categorization policy: {policy!r}")
    positions = np.asarray(positions, dtype=float)
    if positions.shape[0] == 0:
        raise ValueError("cannot categorize an empty user set")
    x0, y0, x1, y1 = edge_square
    inside = (
        (positions[:, 0] >= x0)
        & (positions[:, 0] <= x1)
        & (positions[:, 1] >= y0)
        & (positions[:, 1] <= y1)
    )
    far = tuple(int(i) for i in np.flatnonzero(inside))
    near = tuple(int(i) for i in np.flatnonzero(~inside))
    return far, near


def form_groups(drop: UserDrop, n_chains: int, policy: str = "round_robin") -> list[UserGroup]:
    """Round-robin partition into ceil(K / n_chains) slots of up to n_chains users.

    Each slot gets one far leader (ascending index) while far users last;
    remaining users fill the slots in ascending index order.  Slots without a
    far user run as direct-only fallback groups.
    """
    if policy != "round_robin":
        raise ValueError(f"unknown grouping policy: {policy!r}")
    k = drop.n_users
    if n_chains < 2 and drop.far_set and drop.near_set:
        raise ValueError(
            "n_chains must be >= 2 to serve far and near users in one slot"
        )
    n_slots = -(-k // n_chains)
    leaders = sorted(drop.far_set)[:n_slots]
    rest = sorted(set(range(k)) - set(leaders))
    groups = []
    pos = 0
    for t in range(n_slots):
        members = []
        if t < len(leaders):
            members.append(leaders[t])
        while len(members) < n_chains and pos < len(rest):
            members.append(rest[pos])
            pos += 1
        groups.append(UserGroup(members=tuple(members), slot_index=t))
    return groups


def sinr_to_se(sinr: float, resource_fraction: float = 1.0) -> float:
    """Shannon map: resource_fraction * log2(1 + sinr)."""
    if sinr < 0:
        raise ValueError("sinr must be >= 0")
    if not 0.0 < resource_fraction <= 1.0:
        raise ValueError("resource_fraction must be in (0, 1]")
    return resource_fraction * float(np.log2(1.0 + sinr))


def effective_channel(
    k: int,
    m: int,
    w_m: np.ndarray,
    irs: IrsConfig,
    ch: ChannelRealization,
    drop: UserDrop,
    layout: ArrayLayout,
) -> complex:
    """Exact effective scalar channel from sub-array ``m`` to user ``k``.

    Sum of the reflected path (every surface element, weighted by the beam's
    true gain toward the surface) and the direct path (weighted by the beam's
    true gain toward the user).  Sidelobes are never zeroed here.
    """
    n_chains, n_users = ch.direct.shape
    if not (0 <= k < n_users and 0 <= m < n_chains):
        raise ValueError("user or sub-array index out of range")
    if irs.n_elements != ch.bs_irs.shape[1]:
        raise ValueError("surface configuration does not match the realization")
    b_irs = beam_pattern(layout, w_m, drop.irs_angle)
    b_user = beam_pattern(layout, w_m, float(drop.bs_angles[k]))
    reflected = np.sum(ch.irs_ue[:, k] * irs.coefficients * ch.bs_irs[m, :])
    return complex(reflected * b_irs + ch.direct[m, k] * b_user)


# ---------------------------------------------------------------------------
# shared evaluation machinery
# ---------------------------------------------------------------------------


def _directions(drop: UserDrop) -> np.ndarray:
    """Evaluation directions: index 0 is the surface, 1 + k is user k."""
    return np.concatenate(([drop.irs_angle], np.asarray(drop.bs_angles, dtype=float)))


def _pattern_table(
    layout: ArrayLayout, targets: list[int], dirs: np.ndarray, model: str
) -> tuple[np.ndarray, np.ndarray]:
    """Matched weights plus their pattern values at every direction.

    Returns (weights (S, N_s), patterns (S, D)).  In the idealized model each
    beam keeps only its mainlobe value sqrt(N_s); every off-target entry is 0.
    """
    if model not in SIDELOBE_MODELS:
        raise ValueError(f"unknown sidelobe model: {model!r}")
    weights = np.stack([matched_weights(layout, float(dirs[t])) for t in targets])
    if model == "exact":
        patterns = beam_pattern_matrix(layout, weights, dirs)
    else:
        patterns = np.zeros((len(targets), dirs.shape[0]), dtype=complex)
        for j, t in enumerate(targets):
            patterns[j, t] = np.sqrt(layout.n_per_sub)
    return weights, patterns


def _reflected_rows(ch: ChannelRealization, coeff: np.ndarray, n_streams: int) -> np.ndarray:
    """Composite surface path per (stream, user): sum_n h[m,n] c_n g[n,k]."""
    return ch.bs_irs[:n_streams, :] @ (coeff[:, None] * ch.irs_ue)


def _check_dims(drop: UserDrop, ch: ChannelRealization, scenario) -> None:
    m = scenario.array.n_chains
    k = scenario.n_users
    n = scenario.n_irs_elements
    if ch.direct.shape != (m, k) or ch.bs_irs.shape != (m, n) or ch.irs_ue.shape != (n, k):
        raise ValueError(
            f"realization dimensions {ch.direct.shape}/{ch.bs_irs.shape}/"
            f"{ch.irs_ue.shape} do not match scenario (M={m}, N={n}, K={k})"
        )
    if drop.n_users != k:
        raise ValueError(f"drop has {drop.n_users} users, scenario expects {k}")


def _group_config(
    group: UserGroup, drop: UserDrop, ch: ChannelRealization, scenario
) -> tuple[list[int], IrsConfig]:
    """Beam targets (direction indices) and surface phases for one slot."""
    far_led = bool(group.members) and group.members[0] in drop.far_set
    if far_led:
        targets = [0] + [1 + k for k in group.members[1:]]
        irs = optimal_irs_phases(
            ch.bs_irs[0, :], ch.irs_ue[:, group.members[0]], target_phase=0.0
        )
    else:
        # fallback: no far user in the slot, all beams direct, surface idle
        targets = [1 + k for k in group.members]
        irs = IrsConfig.identity(scenario.n_irs_elements)
    return targets, irs


def beam_division_components(
    group: UserGroup, drop: UserDrop, ch: ChannelRealization, scenario
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Desired amplitude, interference power and SINR per group member.

    The desired amplitude carries the sqrt(P/M) stream prefactor; the
    interference entry is the summed power of all other streams'
    contributions at that member's receiver.
    """
    _check_dims(drop, ch, scenario)
    layout = scenario.array
    members = list(group.members)
    targets, irs = _group_config(group, drop, ch, scenario)
    dirs = _directions(drop)
    weights, patterns = _pattern_table(layout, targets, dirs, scenario.sidelobe_model)
    n_streams = len(members)

    tx = TxConfig(
        weights=weights,
        irs=irs,
        per_stream_power=scenario.total_power_w / layout.n_chains,
        resource_fraction=1.0,
    )
    tx.check_power(scenario.total_power_w)

    reflected = _reflected_rows(ch, irs.coefficients, n_streams)[:, members]
    direct = ch.direct[np.ix_(range(n_streams), members)]
    member_cols = np.array([1 + k for k in members], dtype=int)
    # effective channel of stream j at member c's receiver
    eff = reflected * patterns[:, 0][:, None] + direct * patterns[:, member_cols]

    amp = np.sqrt(tx.per_stream_power)
    desired = amp * np.diagonal(eff)
    power = tx.per_stream_power * np.abs(eff) ** 2
    interference = power.sum(axis=0) - np.diagonal(power)
    noise = scenario.noise_power_w
    sinr = np.abs(desired) ** 2 / (interference + noise)
    return desired, interference, sinr


def bdma_run(drop: UserDrop, ch: ChannelRealization, scenario) -> SchemeOutcome:
    """Beam-division access: every slot member active on the full resource."""
    groups = form_groups(drop, scenario.array.n_chains)
    n_slots = len(groups)
    per_user = np.zeros(scenario.n_users)
    for group in groups:
        _, _, sinr = beam_division_components(group, drop, ch, scenario)
        for member, s in zip(group.members, sinr):
            per_user[member] = sinr_to_se(float(s), 1.0 / n_slots)
    return SchemeOutcome("bdma", per_user, float(per_user.sum()))


def _single_user_amplitude(
    k: int,
    drop: UserDrop,
    ch: ChannelRealization,
    scenario,
    coeff: np.ndarray | None,
) -> tuple[complex, np.ndarray]:
    """Aggregate received amplitude for user ``k`` under the one-user beam setup.

    Sub-array 0 points at the surface, all others at the user.  When
    ``coeff`` is None the surface is re-phased for this user (co-phased with
    the direct aggregate); otherwise the given frozen coefficients apply.
    Returns (amplitude, coefficients used).
    """
    layout = scenario.array
    dirs = _directions(drop)
    targets = [0] + [1 + k] * (layout.n_chains - 1)
    _, patterns = _pattern_table(layout, targets, dirs, scenario.sidelobe_model)
    direct_aggregate = complex(np.sum(ch.direct[:, k] * patterns[:, 1 + k]))
    if coeff is None:
        psi = cophase_with_direct(direct_aggregate)
        irs = optimal_irs_phases(ch.bs_irs[0, :], ch.irs_ue[:, k], target_phase=psi)
        coeff = irs.coefficients
    reflected_per_stream = ch.bs_irs @ (coeff * ch.irs_ue[:, k])
    reflected = complex(np.sum(reflected_per_stream * patterns[:, 0]))
    return direct_aggregate + reflected, coeff


def tdma_run(drop: UserDrop, ch: ChannelRealization, scenario) -> SchemeOutcome:
    """One user per 1/K time slot, full power, surface re-phased per user."""
    _check_dims(drop, ch, scenario)
    k_users = scenario.n_users
    stream_power = scenario.total_power_w / scenario.array.n_chains
    noise = scenario.noise_power_w
    per_user = np.zeros(k_users)
    for k in range(k_users):
        amplitude, _ = _single_user_amplitude(k, drop, ch, scenario, coeff=None)
        snr = stream_power * abs(amplitude) ** 2 / noise
        per_user[k] = sinr_to_se(snr, 1.0 / k_users)
    return SchemeOutcome("tdma", per_user, float(per_user.sum()))


def fdma_run(drop: UserDrop, ch: ChannelRealization, scenario) -> SchemeOutcome:
    """Per-user sub-bands with surface phases frozen at the leader's optimum.

    Each user receives 1/K of the power in 1/K of the bandwidth, so the
    per-user SNR expression matches TDMA's; only the reflection differs.  The
    leader is the first slot's far user (first user when no far user exists),
    the one transmission the surface can actually aid.
    """
    _check_dims(drop, ch, scenario)
    k_users = scenario.n_users
    leader = form_groups(drop, scenario.array.n_chains)[0].members[0]
    _, frozen = _single_user_amplitude(leader, drop, ch, scenario, coeff=None)
    stream_power = scenario.total_power_w / scenario.array.n_chains
    noise = scenario.noise_power_w
    per_user = np.zeros(k_users)
    for k in range(k_users):
        amplitude, _ = _single_user_amplitude(k, drop, ch, scenario, coeff=frozen)
        sinr = stream_power * abs(amplitude) ** 2 / noise
        per_user[k] = sinr_to_se(sinr, 1.0 / k_users)
    return SchemeOutcome("fdma", per_user, float(per_user.sum()))


def noma_run(drop: UserDrop, ch: ChannelRealization, scenario) -> SchemeOutcome:
    """Power-domain superposition over the beam-division spatial setup.

    Every active chain carries the same equal-power superposition of all K
    signals, so each user sees one scalar channel: the sum of its per-chain
    effective channels.  Receivers cancel every weaker-ranked signal and
    treat stronger-ranked ones as noise; ties break by user index.
    """
    _check_dims(drop, ch, scenario)
    layout = scenario.array
    k_users = scenario.n_users
    group = form_groups(drop, layout.n_chains)[0]
    targets, irs = _group_config(group, drop, ch, scenario)
    dirs = _directions(drop)
    weights, patterns = _pattern_table(layout, targets, dirs, scenario.sidelobe_model)
    n_streams = len(targets)

    tx = TxConfig(
        weights=weights,
        irs=irs,
        per_stream_power=scenario.total_power_w / layout.n_chains,
        resource_fraction=1.0,
    )
    tx.check_power(scenario.total_power_w)

    reflected = _reflected_rows(ch, irs.coefficients, n_streams)
    direct = ch.direct[:n_streams, :]
    eff = reflected * patterns[:, 0][:, None] + direct * patterns[:, 1:]
    e = eff.sum(axis=0)  # (K,) one scalar channel per user

    order = np.lexsort((np.arange(k_users), np.abs(e)))  # ascending, ties by index
    p = scenario.total_power_w / k_users
    noise = scenario.noise_power_w
    per_user = np.zeros(k_users)
    for rank_pos, user in enumerate(order):
        stronger = k_users - 1 - rank_pos
        signal = p * abs(e[user]) ** 2
        per_user[user] = sinr_to_se(signal / (stronger * signal + noise), 1.0)
    return SchemeOutcome("noma", per_user, float(per_user.sum()))


SCHEME_RUNNERS = {
    "bdma": bdma_run,
    "tdma": tdma_run,
    "fdma": fdma_run,
    "noma": noma_run,
}
