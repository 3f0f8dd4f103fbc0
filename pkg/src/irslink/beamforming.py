"""Closed-form beam and reflection optimization.

Two pieces: matched (maximum-gain) analog weight vectors per sub-array under
a unit total-power constraint, and the reflection phases that make every
cascaded path arrive at the receiver with a common phase so magnitudes add.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import TWO_PI, ArrayLayout, steering_vector


@dataclass(frozen=True)
class IrsConfig:
    """Reflection state of the surface: one phase per element, unit amplitude."""

    phases: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self) -> None:
        phases = np.mod(np.asarray(self.phases, dtype=float), TWO_PI)
        phases[phases >= TWO_PI] = 0.0
        object.__setattr__(self, "phases", phases)

    @property
    def n_elements(self) -> int:
        return self.phases.shape[0]

    @property
    def amplitudes(self) -> np.ndarray:
        return np.ones(self.n_elements)

    @property
    def coefficients(self) -> np.ndarray:
        """Per-element reflection coefficients exp(j*phase)."""
        return np.exp(1j * self.phases)

    @classmethod
    def identity(cls, n_elements: int) -> "IrsConfig":
        return cls(np.zeros(n_elements))


def matched_weights(layout: ArrayLayout, theta: float) -> np.ndarray:
    """Unit-norm weight vector steering a sub-array's mainlobe to ``theta``.

    The pattern gain at ``theta`` is sqrt(n_per_sub), the maximum attainable
    under the unit total-power constraint.
    """
    return steering_vector(layout, theta) / np.sqrt(layout.n_per_sub)


def optimal_irs_phases(
    bs_irs_row: np.ndarray, irs_ue_col: np.ndarray, target_phase: float = 0.0
) -> IrsConfig:
    """Phases that align every reflected branch to ``target_phase``.

    For element n the product ``irs_ue[n] * exp(j*phase[n]) * bs_irs[n]``
    ends up with argument ``target_phase``, so the branch magnitudes add
    coherently at the receiver.  Zero-magnitude branches get phase 0.
    """
    h = np.asarray(bs_irs_row)
    g = np.asarray(irs_ue_col)
    if h.shape != g.shape or h.ndim != 1:
        raise ValueError(
            f"channel vectors must be 1-D and equal length, got {h.shape} and {g.shape}"
        )
    phases = np.mod(target_phase - np.angle(h) - np.angle(g), TWO_PI)
    phases[(h == 0) | (g == 0)] = 0.0
    return IrsConfig(phases)


def cophase_with_direct(direct_aggregate: complex) -> float:
    """Target phase that lets the reflected sum add coherently with the direct path.

    Returns the argument of the direct-path aggregate, or 0 when there is no
    direct contribution.
    """
    if direct_aggregate == 0:
        return 0.0
    return float(np.angle(direct_aggregate))
