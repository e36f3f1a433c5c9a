"""Experiments API router."""

import time

import orjson
from fastapi import APIRouter

from app.apis.v1.types_in import ConfigPayload, RunRequest
from app.apis.v1.types_out import (
    ExperimentInfo,
    ExperimentListResponse,
    RunResponse,
    RunSummary,
    ValidationResponse,
)
from app.core.v1.config_loader import parse_config
from app.core.v1.experiment_runner import ExperimentRunner
from app.core.v1.experiments import REGISTRY
from app.core.v1.log_manager import LogManager

# Initialize router
router = APIRouter()

logger = LogManager(__name__)


def _parse_payload(payload: ConfigPayload):
    return parse_config(orjson.dumps(payload.config, option=orjson.OPT_INDENT_2).decode(), "<request>")


@router.get(
    "",
    response_model=ExperimentListResponse,
    summary="List experiments",
    description="Registered experiments E1-E7 with their claims"
)
def list_experiments() -> ExperimentListResponse:
    experiments = [
        ExperimentInfo(
            id=definition.id,
            title=definition.title,
            claim=definition.claim,
            reference=definition.reference,
            exploratory=definition.exploratory,
        )
        for definition in REGISTRY.values()
    ]
    return ExperimentListResponse(experiments=experiments, total=len(experiments))


@router.post(
    "/validate",
    response_model=ValidationResponse,
    summary="Validate a config",
    description="Checks a lab config against the schema without running it"
)
def validate_config(payload: ConfigPayload) -> ValidationResponse:
    """Validate a config; schema errors surface as 400 with the offending line."""
    specs = _parse_payload(payload).resolved()
    return ValidationResponse(
        experiments=[spec.name for spec in specs],
        grid_points={spec.name: spec.grid.n_points for spec in specs},
    )


@router.post(
    "/run",
    response_model=RunResponse,
    summary="Run a config",
    description="Runs every experiment of a config and returns verdicts and results"
)
def run_config(request: RunRequest) -> RunResponse:
    """Run the experiments synchronously on the worker thread pool."""
    started = time.perf_counter()
    specs = _parse_payload(request).resolved()
    outcomes = ExperimentRunner(request.jobs).run(specs)

    summaries = []
    results = []
    for outcome in outcomes:
        result = outcome.result
        if result is not None:
            results.append(result)
        summaries.append(
            RunSummary(
                name=outcome.spec.name,
                verdict=result.verdict if result else None,
                growth_fits=result.growth_fits if result else {},
                warnings=result.warnings if result else [],
                error=outcome.error.message if outcome.error else None,
                seconds=outcome.seconds,
            )
        )

    total = time.perf_counter() - started
    logger.info("API run finished", experiments=len(specs), duration=total)
    return RunResponse(summaries=summaries, results=results, total_seconds=total)
