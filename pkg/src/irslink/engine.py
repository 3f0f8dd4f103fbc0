"""Monte-Carlo campaign engine.

A campaign evaluates every requested scheme on the same sequence of drops
(paired comparison).  Each drop owns an independent random stream derived
from (seed, drop index) only, so results are bit-identical for any worker
count and unaffected by which schemes are requested.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .channel import LargeScaleParams, NoiseParams, generate_channels, noise_power
from .geometry import ArrayLayout, angle_of
from .schemes import SCHEME_RUNNERS, SCHEME_TAGS, SIDELOBE_MODELS, UserDrop, categorize_users

# Center-square draws are rejected inside this radius around the BS.
MIN_BS_CLEARANCE_M = 10.0


class CampaignError(RuntimeError):
    """A drop failed; carries the drop index in the message."""


@dataclass(frozen=True)
class ScenarioConfig:
    """Full description of one simulation campaign."""

    array: ArrayLayout = field(default_factory=lambda: ArrayLayout.split(64, 8))
    n_users: int = 8
    n_far_users: int = 1
    n_irs_elements: int = 200
    total_power_w: float = 20.0
    bs_position: tuple[float, float] = (0.0, 0.0)
    irs_position: tuple[float, float] = (125.0, 125.0)
    center_square: tuple[float, float, float, float] = (-62.5, -62.5, 62.5, 62.5)
    edge_square: tuple[float, float, float, float] = (100.0, 100.0, 150.0, 150.0)
    noise: NoiseParams = field(default_factory=NoiseParams)
    large_scale: LargeScaleParams = field(default_factory=LargeScaleParams)
    n_drops: int = 2000
    seed: int = 1
    schemes: tuple[str, ...] = SCHEME_TAGS
    sidelobe_model: str = "idealized"
    n_workers: int = 1

    def __post_init__(self) -> None:
        if self.n_users < 1:
            raise ValueError("n_users must be >= 1")
        if not 0 <= self.n_far_users <= self.n_users:
            raise ValueError("n_far_users must be in [0, n_users]")
        if self.n_irs_elements < 0:
            raise ValueError("n_irs_elements must be >= 0")
        if not self.total_power_w > 0:
            raise ValueError("total_power_w must be > 0")
        if self.n_drops < 1:
            raise ValueError("n_drops must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be >= 0")
        if self.n_workers < 1:
            raise ValueError("n_workers must be >= 1")
        for name in ("center_square", "edge_square"):
            x0, y0, x1, y1 = getattr(self, name)
            if not (x1 > x0 and y1 > y0):
                raise ValueError(f"{name} is empty: {getattr(self, name)}")
        ex0, ey0, ex1, ey1 = self.edge_square
        ix, iy = self.irs_position
        if not (ex0 <= ix <= ex1 and ey0 <= iy <= ey1):
            raise ValueError("irs_position must lie inside edge_square")
        if not self.schemes:
            raise ValueError("at least one scheme must be requested")
        for tag in self.schemes:
            if tag not in SCHEME_TAGS:
                raise ValueError(
                    f"unknown scheme {tag!r}; valid schemes: {', '.join(SCHEME_TAGS)}"
                )
        if self.sidelobe_model not in SIDELOBE_MODELS:
            raise ValueError(
                f"unknown sidelobe_model {self.sidelobe_model!r}; "
                f"valid models: {', '.join(SIDELOBE_MODELS)}"
            )

    @property
    def noise_power_w(self) -> float:
        return noise_power(self.noise)

    def with_updates(self, **changes) -> "ScenarioConfig":
        return replace(self, **changes)


@dataclass(frozen=True)
class CdfSummary:
    """Sorted per-drop sum spectral efficiencies of one scheme."""

    scheme_tag: str
    sorted_sums: np.ndarray  # ascending, bps/Hz

    def __post_init__(self) -> None:
        sums = np.asarray(self.sorted_sums, dtype=float)
        if np.any(np.diff(sums) < 0):
            raise ValueError("sorted_sums must be non-decreasing")
        object.__setattr__(self, "sorted_sums", sums)

    @property
    def n_drops(self) -> int:
        return self.sorted_sums.shape[0]

    @property
    def mean(self) -> float:
        return float(np.mean(self.sorted_sums))

    def percentile(self, p: float) -> float:
        return percentile(self, p)


def percentile(summary: CdfSummary, p: float) -> float:
    """Lower order statistic at CDF level ``p``: index ceil(p*n) - 1."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must be in (0, 1)")
    n = summary.n_drops
    if n == 0:
        raise ValueError("empty summary")
    return float(summary.sorted_sums[math.ceil(p * n) - 1])


def place_users(scenario: ScenarioConfig, rng: np.random.Generator) -> UserDrop:
    """Draw one user placement: far users on the edge square, the rest central.

    Center-square draws within 10 m of the BS are rejected and redrawn.
    User indices start with the far draws.
    """
    ex0, ey0, ex1, ey1 = scenario.edge_square
    cx0, cy0, cx1, cy1 = scenario.center_square
    bs = np.asarray(scenario.bs_position, dtype=float)

    positions = np.empty((scenario.n_users, 2))
    n_far = scenario.n_far_users
    if n_far:
        positions[:n_far, 0] = rng.uniform(ex0, ex1, n_far)
        positions[:n_far, 1] = rng.uniform(ey0, ey1, n_far)
    for i in range(n_far, scenario.n_users):
        while True:
            p = np.array([rng.uniform(cx0, cx1), rng.uniform(cy0, cy1)])
            if np.hypot(*(p - bs)) >= MIN_BS_CLEARANCE_M:
                positions[i] = p
                break

    bs_angles = np.array([angle_of(bs, p) for p in positions])
    irs = np.asarray(scenario.irs_position, dtype=float)
    bs_distances = np.hypot(positions[:, 0] - bs[0], positions[:, 1] - bs[1])
    irs_distances = np.hypot(positions[:, 0] - irs[0], positions[:, 1] - irs[1])
    far_set, near_set = categorize_users(positions, scenario.edge_square)
    return UserDrop(
        positions=positions,
        bs_angles=bs_angles,
        irs_angle=angle_of(bs, irs),
        bs_distances=bs_distances,
        irs_distances=irs_distances,
        far_set=far_set,
        near_set=near_set,
    )


def _drop_rng(seed: int, drop_index: int) -> np.random.Generator:
    """Independent stream for one drop, a function of (seed, index) only."""
    return np.random.default_rng([seed, drop_index])


def evaluate_drop(scenario: ScenarioConfig, drop_index: int) -> np.ndarray:
    """Sum spectral efficiency of every requested scheme on one drop."""
    rng = _drop_rng(scenario.seed, drop_index)
    drop = place_users(scenario, rng)
    ch = generate_channels(scenario, drop, rng)
    return np.array(
        [SCHEME_RUNNERS[tag](drop, ch, scenario).sum_se for tag in scenario.schemes]
    )


def _drop_range(scenario: ScenarioConfig, indices) -> np.ndarray:
    out = np.empty((len(indices), len(scenario.schemes)))
    for row, d in enumerate(indices):
        try:
            out[row] = evaluate_drop(scenario, d)
        except Exception as exc:  # noqa: BLE001 - re-raised with drop context
            raise CampaignError(f"drop {d} failed: {exc}") from exc
    return out


def run_campaign(scenario: ScenarioConfig) -> dict[str, CdfSummary]:
    """Run all drops and assemble one CDF summary per requested scheme."""
    n = scenario.n_drops
    if scenario.n_workers == 1:
        sums = _drop_range(scenario, range(n))
    else:
        workers = min(scenario.n_workers, n)
        bounds = np.linspace(0, n, workers + 1).astype(int)
        chunks = [range(bounds[i], bounds[i + 1]) for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_drop_range, [scenario] * workers, chunks))
        sums = np.vstack(parts)
    return {
        tag: CdfSummary(scheme_tag=tag, sorted_sums=np.sort(sums[:, i]))
        for i, tag in enumerate(scenario.schemes)
    }
