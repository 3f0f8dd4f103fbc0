"""Command-line front end.

A thin client over the engine: flags override config-file values, which
override the built-in defaults.  With ``--server`` the campaign is delegated
to a running service instance and the same output files are written locally.
"""

from __future__ import annotations

import argparse
import sys
from typing import Any

import numpy as np

from . import __version__
from .config import ConfigError, _as_schemes, build_scenario, parse_config
from .engine import CampaignError, CdfSummary, run_campaign
from .output import emit_cdf


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="irslink",
        description=(
            "Monte-Carlo downlink simulator: sum-spectral-efficiency CDFs for "
            "beam-division access and its TDMA/FDMA/NOMA baselines."
        ),
    )
    parser.add_argument("--config", metavar="PATH", help="config file or manifest.json")
    parser.add_argument("--drops", metavar="N", type=int, help="number of drops")
    parser.add_argument("--seed", metavar="S", type=int, help="campaign seed")
    parser.add_argument(
        "--schemes", metavar="LIST", help="comma-separated subset of bdma,tdma,fdma,noma"
    )
    parser.add_argument(
        "--out", metavar="DIR", default="results", help="output directory (default: results)"
    )
    parser.add_argument(
        "--unit-override",
        choices=("m", "km"),
        help="distance unit for the scattered-path loss law",
    )
    parser.add_argument(
        "--server", metavar="URL", help="delegate the run to a service instance"
    )
    parser.add_argument("--version", action="version", version=f"irslink {__version__}")
    return parser


def _overrides_from_args(args: argparse.Namespace) -> dict[str, Any]:
    overrides: dict[str, Any] = {}
    if args.config:
        overrides.update(parse_config(args.config))
    if args.drops is not None:
        overrides["n_drops"] = args.drops
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.schemes is not None:
        overrides["schemes"] = _as_schemes("schemes", args.schemes)
    if args.unit_override is not None:
        overrides["large_scale.nlos_distance_unit"] = args.unit_override
    return overrides


def _run_remote(server: str, overrides: dict[str, Any]):
    import httpx

    response = httpx.post(
        server.rstrip("/") + "/runs", json={"config": overrides}, timeout=None
    )
    if response.status_code != 200:
        detail = response.json().get("detail", response.text)
        raise RuntimeError(f"server rejected the run ({response.status_code}): {detail}")
    payload = response.json()
    scenario = build_scenario(payload["scenario"])
    summaries = {
        item["scheme"]: CdfSummary(
            scheme_tag=item["scheme"], sorted_sums=np.asarray(item["sorted_sums"])
        )
        for item in payload["results"]
    }
    return scenario, summaries


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        overrides = _overrides_from_args(args)
        if args.server:
            scenario, summaries = _run_remote(args.server, overrides)
        else:
            scenario = build_scenario(overrides)
            summaries = run_campaign(scenario)
        paths = emit_cdf(summaries, args.out, scenario)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (CampaignError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {len(paths)} files to {args.out}")
    return 0


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
