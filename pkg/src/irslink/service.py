"""HTTP service wrapping the campaign engine.

Run with ``uvicorn irslink.service:app``.  Requests carry the same flat
config keys as the CLI's config file; the response returns the resolved
scenario together with each scheme's sorted per-drop sums and percentile
summary, so a client can rebuild the exact CDF files locally.
"""

from __future__ import annotations

from typing import Any

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .config import ConfigError, build_scenario, scenario_to_flat
from .engine import CampaignError, run_campaign
from .output import SUMMARY_PERCENTILES


class RunRequest(BaseModel):
    """Flat config overrides, same keys and semantics as the config file."""

    config: dict[str, Any] = Field(default_factory=dict)


class SchemeResult(BaseModel):
    scheme: str
    p05: float
    p50: float
    p95: float
    mean: float
    sorted_sums: list[float]


class RunResponse(BaseModel):
    version: str
    scenario: dict[str, Any]
    results: list[SchemeResult]


class HealthResponse(BaseModel):
    status: str
    version: str


class DefaultsResponse(BaseModel):
    scenario: dict[str, Any]


app = FastAPI(
    title="irslink",
    version=__version__,
    description="Monte-Carlo downlink simulator for surface-aided multi-user access",
)


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.get("/defaults", response_model=DefaultsResponse)
def defaults() -> DefaultsResponse:
    return DefaultsResponse(scenario=scenario_to_flat(build_scenario()))


@app.post("/runs", response_model=RunResponse)
def run(request: RunRequest) -> RunResponse:
    try:
        scenario = build_scenario(request.config)
    except ConfigError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    try:
        summaries = run_campaign(scenario)
    except CampaignError as exc:
        raise HTTPException(status_code=500, detail=str(exc)) from exc
    p05, p50, p95 = SUMMARY_PERCENTILES
    results = [
        SchemeResult(
            scheme=tag,
            p05=s.percentile(p05),
            p50=s.percentile(p50),
            p95=s.percentile(p95),
            mean=s.mean,
            sorted_sums=s.sorted_sums.tolist(),
        )
        for tag, s in summaries.items()
    ]
    return RunResponse(
        version=__version__, scenario=scenario_to_flat(scenario), results=results
    )
