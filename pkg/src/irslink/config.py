"""Configuration ingestion and the run manifest.

The config file is flat ``key = value`` text with dotted sections for noise
and large-scale parameters; ``#`` starts a comment.  Unknown keys are
rejected.  Missing keys take the documented defaults (the 64-antenna,
8-chain, 8-user reference scenario).  A previously emitted ``manifest.json``
is also accepted wherever a config file is, which makes runs re-playable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Mapping

from . import __version__
from .channel import LargeScaleParams, NoiseParams
from .engine import ScenarioConfig
from .geometry import ArrayLayout
from .schemes import SCHEME_TAGS, SIDELOBE_MODELS


class ConfigError(ValueError):
    """Malformed configuration; the message names the key and constraint."""


def _as_int(key: str, value: Any) -> int:
    if isinstance(value, bool):
        raise ConfigError(f"key '{key}' must be an integer, got {value!r}")
    if isinstance(value, int):
        return value
    try:
        return int(str(value).strip())
    except ValueError:
        raise ConfigError(f"key '{key}' must be an integer, got {value!r}") from None


def _as_float(key: str, value: Any) -> float:
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"key '{key}' must be a number, got {value!r}") from None


def _as_floats(key: str, value: Any, count: int) -> tuple[float, ...]:
    parts = value.split(",") if isinstance(value, str) else list(value)
    if len(parts) != count:
        raise ConfigError(f"key '{key}' must hold {count} comma-separated numbers")
    return tuple(_as_float(key, p) for p in parts)


def _as_point(key: str, value: Any) -> tuple[float, float]:
    return _as_floats(key, value, 2)


def _as_rect(key: str, value: Any) -> tuple[float, float, float, float]:
    return _as_floats(key, value, 4)


def _as_schemes(key: str, value: Any) -> tuple[str, ...]:
    parts = value.split(",") if isinstance(value, str) else list(value)
    tags = tuple(str(p).strip().lower() for p in parts if str(p).strip())
    if not tags:
        raise ConfigError(f"key '{key}' must list at least one scheme")
    for tag in tags:
        if tag not in SCHEME_TAGS:
            raise ConfigError(
                f"key '{key}': unknown scheme '{tag}'; valid schemes: "
                + ", ".join(SCHEME_TAGS)
            )
    return tags


def _as_choice(key: str, value: Any, choices: tuple[str, ...]) -> str:
    token = str(value).strip().lower()
    if token not in choices:
        raise ConfigError(
            f"key '{key}' must be one of {', '.join(choices)}; got {value!r}"
        )
    return token


# key -> (converter, default); converters also accept JSON-native values so a
# manifest round-trips through the same path as a config file.
CONFIG_SCHEMA: dict[str, tuple] = {
    "n_antennas": (_as_int, 64),
    "n_chains": (_as_int, 8),
    "spacing_wavelengths": (_as_float, 0.5),
    "n_users": (_as_int, 8),
    "n_far_users": (_as_int, 1),
    "n_irs_elements": (_as_int, 200),
    "total_power_w": (_as_float, 20.0),
    "n_drops": (_as_int, 2000),
    "seed": (_as_int, 1),
    "n_workers": (_as_int, 1),
    "schemes": (_as_schemes, SCHEME_TAGS),
    "sidelobe_model": (lambda k, v: _as_choice(k, v, SIDELOBE_MODELS), "idealized"),
    "bs_position": (_as_point, (0.0, 0.0)),
    "irs_position": (_as_point, (125.0, 125.0)),
    "center_square": (_as_rect, (-62.5, -62.5, 62.5, 62.5)),
    "edge_square": (_as_rect, (100.0, 100.0, 150.0, 150.0)),
    "noise.bandwidth_hz": (_as_float, 2.0e7),
    "noise.temperature_k": (_as_float, 290.0),
    "noise.noise_figure_db": (_as_float, 9.0),
    "large_scale.nlos_intercept_db": (_as_float, -166.0),
    "large_scale.nlos_slope": (_as_float, 35.0),
    "large_scale.shadowing_std_db": (_as_float, 8.0),
    "large_scale.los_ref_loss_db": (_as_float, 60.0),
    "large_scale.los_exponent": (_as_float, 2.0),
    "large_scale.rician_factor": (_as_float, 5.0),
    "large_scale.nlos_distance_unit": (
        lambda k, v: _as_choice(k, v, ("m", "km")),
        "km",
    ),
}


def parse_config(path) -> dict[str, Any]:
    """Read a flat key-value config file (or an emitted manifest) into overrides."""
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        try:
            manifest = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"malformed manifest JSON in {path}: {exc}") from None
        scenario = manifest.get("scenario")
        if not isinstance(scenario, dict):
            raise ConfigError(f"manifest {path} has no 'scenario' section")
        return normalize_overrides(scenario)

    overrides: dict[str, Any] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in CONFIG_SCHEMA:
            raise ConfigError(
                f"{path}:{lineno}: unknown key '{key}'; valid keys: "
                + ", ".join(sorted(CONFIG_SCHEMA))
            )
        overrides[key] = value
    return normalize_overrides(overrides)


def normalize_overrides(overrides: Mapping[str, Any]) -> dict[str, Any]:
    """Type-check overrides against the schema, keeping only given keys."""
    out: dict[str, Any] = {}
    for key, value in overrides.items():
        if key not in CONFIG_SCHEMA:
            raise ConfigError(
                f"unknown key '{key}'; valid keys: " + ", ".join(sorted(CONFIG_SCHEMA))
            )
        out[key] = CONFIG_SCHEMA[key][0](key, value)
    return out


def build_scenario(overrides: Mapping[str, Any] | None = None) -> ScenarioConfig:
    """Resolve overrides against defaults and build a validated scenario."""
    flat = {key: default for key, (_, default) in CONFIG_SCHEMA.items()}
    flat.update(normalize_overrides(overrides or {}))
    try:
        array = ArrayLayout.split(
            flat["n_antennas"], flat["n_chains"], flat["spacing_wavelengths"]
        )
        noise = NoiseParams(
            bandwidth_hz=flat["noise.bandwidth_hz"],
            temperature_k=flat["noise.temperature_k"],
            noise_figure_db=flat["noise.noise_figure_db"],
        )
        large_scale = LargeScaleParams(
            nlos_intercept_db=flat["large_scale.nlos_intercept_db"],
            nlos_slope=flat["large_scale.nlos_slope"],
            shadowing_std_db=flat["large_scale.shadowing_std_db"],
            los_ref_loss_db=flat["large_scale.los_ref_loss_db"],
            los_exponent=flat["large_scale.los_exponent"],
            rician_factor=flat["large_scale.rician_factor"],
            nlos_distance_unit=flat["large_scale.nlos_distance_unit"],
        )
        return ScenarioConfig(
            array=array,
            n_users=flat["n_users"],
            n_far_users=flat["n_far_users"],
            n_irs_elements=flat["n_irs_elements"],
            total_power_w=flat["total_power_w"],
            bs_position=flat["bs_position"],
            irs_position=flat["irs_position"],
            center_square=flat["center_square"],
            edge_square=flat["edge_square"],
            noise=noise,
            large_scale=large_scale,
            n_drops=flat["n_drops"],
            seed=flat["seed"],
            schemes=flat["schemes"],
            sidelobe_model=flat["sidelobe_model"],
            n_workers=flat["n_workers"],
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc


def scenario_to_flat(scenario: ScenarioConfig) -> dict[str, Any]:
    """Flatten a scenario back to the config key set (JSON-friendly values)."""
    return {
        "n_antennas": scenario.array.n_total,
        "n_chains": scenario.array.n_chains,
        "spacing_wavelengths": scenario.array.spacing,
        "n_users": scenario.n_users,
        "n_far_users": scenario.n_far_users,
        "n_irs_elements": scenario.n_irs_elements,
        "total_power_w": scenario.total_power_w,
        "n_drops": scenario.n_drops,
        "seed": scenario.seed,
        "n_workers": scenario.n_workers,
        "schemes": list(scenario.schemes),
        "sidelobe_model": scenario.sidelobe_model,
        "bs_position": list(scenario.bs_position),
        "irs_position": list(scenario.irs_position),
        "center_square": list(scenario.center_square),
        "edge_square": list(scenario.edge_square),
        "noise.bandwidth_hz": scenario.noise.bandwidth_hz,
        "noise.temperature_k": scenario.noise.temperature_k,
        "noise.noise_figure_db": scenario.noise.noise_figure_db,
        "large_scale.nlos_intercept_db": scenario.large_scale.nlos_intercept_db,
        "large_scale.nlos_slope": scenario.large_scale.nlos_slope,
        "large_scale.shadowing_std_db": scenario.large_scale.shadowing_std_db,
        "large_scale.los_ref_loss_db": scenario.large_scale.los_ref_loss_db,
        "large_scale.los_exponent": scenario.large_scale.los_exponent,
        "large_scale.rician_factor": scenario.large_scale.rician_factor,
        "large_scale.nlos_distance_unit": scenario.large_scale.nlos_distance_unit,
    }


@dataclass(frozen=True)
class RunManifest:
    """Everything needed to reproduce a run, serialized alongside results."""

    scenario: ScenarioConfig
    outputs: dict[str, str]
    created_utc: str = ""

    def to_json(self) -> str:
        payload = {
            "tool": {"name": "irslink", "version": __version__},
            "created_utc": self.created_utc
            or datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "seed": self.scenario.seed,
            "scenario": scenario_to_flat(self.scenario),
            "outputs": self.outputs,
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
