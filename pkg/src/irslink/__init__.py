"""Link-level Monte-Carlo simulator for an IRS-aided multi-user downlink.

Compares beam-division multiple access against TDMA, FDMA and NOMA baselines
by sum-spectral-efficiency CDF over randomized user drops.
"""

__version__ = "0.1.0"

from .beamforming import IrsConfig, cophase_with_direct, matched_weights, optimal_irs_phases
from .channel import (
    ChannelRealization,
    LargeScaleParams,
    NoiseParams,
    draw_rayleigh,
    draw_rician,
    generate_channels,
    los_loss_db,
    nlos_gain_db,
    noise_power,
)
from .engine import CdfSummary, ScenarioConfig, percentile, place_users, run_campaign
from .geometry import ArrayLayout, angle_of, beam_pattern, element_phase, steering_vector
from .schemes import (
    SCHEME_TAGS,
    SchemeOutcome,
    UserDrop,
    UserGroup,
    bdma_run,
    categorize_users,
    effective_channel,
    fdma_run,
    form_groups,
    noma_run,
    sinr_to_se,
    tdma_run,
)

__all__ = [
    "ArrayLayout",
    "CdfSummary",
    "ChannelRealization",
    "IrsConfig",
    "LargeScaleParams",
    "NoiseParams",
    "ScenarioConfig",
    "SchemeOutcome",
    "SCHEME_TAGS",
    "UserDrop",
    "UserGroup",
    "angle_of",
    "bdma_run",
    "beam_pattern",
    "categorize_users",
    "cophase_with_direct",
    "draw_rayleigh",
    "draw_rician",
    "effective_channel",
    "element_phase",
    "fdma_run",
    "form_groups",
    "generate_channels",
    "los_loss_db",
    "matched_weights",
    "nlos_gain_db",
    "noise_power",
    "noma_run",
    "optimal_irs_phases",
    "percentile",
    "place_users",
    "run_campaign",
    "sinr_to_se",
    "steering_vector",
    "tdma_run",
    "__version__",
]
