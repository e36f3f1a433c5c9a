"""Command-line entry point: run, list and sweep."""

import time
from pathlib import Path
from typing import List, Optional, Sequence, Union

import click
import orjson
import pandas as pd

from app.core.v1.config_loader import load_config
from app.core.v1.exceptions import (
    ConfigurationException,
    DataException,
    LabException,
    NumericalException,
    UnsupportedException,
)
from app.core.v1.experiment_runner import ExperimentRunner, RunOutcome
from app.core.v1.experiment_schema import ExperimentResult, RunManifest, with_parameter
from app.core.v1.experiments import REGISTRY, final_distance
from app.core.v1.log_manager import LogManager
from app.core.v1.reporting import write_csv, write_experiment_outputs, write_json, write_manifest
from app.settings.v1.general import SETTINGS

logger = LogManager(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

# Highest severity wins when several experiments fail differently
_SEVERITY = {EXIT_OK: 0, EXIT_FAIL: 1, EXIT_NUMERICAL: 2, EXIT_CONFIG: 3}


def _worst(first: int, second: int) -> int:
    return first if _SEVERITY[first] >= _SEVERITY[second] else second


def _error_code(error: LabException) -> int:
    if isinstance(error, NumericalException):
        return EXIT_NUMERICAL
    if isinstance(error, (ConfigurationException, DataException, UnsupportedException)):
        return EXIT_CONFIG
    return EXIT_NUMERICAL


def _verdict_code(result: ExperimentResult) -> int:
    if result.verdict == "fail" and not result.exploratory:
        return EXIT_FAIL
    return EXIT_OK


def _summary_line(result: ExperimentResult) -> str:
    fits = ", ".join(f"{key}={fit.exponent:.3f}" for key, fit in sorted(result.growth_fits.items()))
    suffix = f"  [{fits}]" if fits else ""
    return f"{result.name:<10} {result.verdict:<8} {REGISTRY[result.id].title}{suffix}"


def _report_flagged(results: Sequence[ExperimentResult]) -> None:
    flagged = [result for result in results if result.verdict == "flagged"]
    for result in flagged:
        reasons = result.warnings + result.notes
        click.echo(f"flagged: {result.name}: {'; '.join(reasons) or 'see result JSON'}")


def cmd_run(config_path: Union[str, Path], out_dir: Union[str, Path], jobs: int = 1) -> int:
    """Run every experiment in a config and write results plus manifest.json.

    Returns:
        int: 0 when all non-exploratory verdicts pass or flag, 1 on a failed verdict,
            2 on a configuration error, 3 on a numerical error.
    """
    out = Path(out_dir)
    try:
        config = load_config(config_path)
    except LabException as err:
        click.echo(f"error: {err.message}", err=True)
        return EXIT_CONFIG

    started = time.perf_counter()
    specs = config.resolved()
    outcomes = ExperimentRunner(jobs).run(specs)

    manifest = RunManifest(
        config_path=str(config_path),
        output_dir=str(out),
        tool_version=SETTINGS.APP_VERSION,
        resolved_specs=specs,
    )
    code = EXIT_OK
    results: List[ExperimentResult] = []
    for outcome in outcomes:
        name = outcome.spec.name
        manifest.timings[name] = outcome.seconds
        if outcome.error is not None:
            click.echo(f"error: {name}: {outcome.error.message}", err=True)
            code = _worst(code, _error_code(outcome.error))
            continue
        result = outcome.result
        results.append(result)
        manifest.files[name] = write_experiment_outputs(result, out)
        manifest.verdicts[name] = result.verdict
        click.echo(_summary_line(result))
        code = _worst(code, _verdict_code(result))

    _report_flagged(results)
    manifest.total_seconds = time.perf_counter() - started
    write_manifest(manifest, out)
    logger.info("Run finished", experiments=len(specs), exit_code=code, out_dir=str(out))
    return code


def cmd_list(as_json: bool = False) -> int:
    """Print the experiment registry, one line per experiment."""
    if as_json:
        registry = [
            {
                "id": definition.id,
                "title": definition.title,
                "claim": definition.claim,
                "reference": definition.reference,
                "exploratory": definition.exploratory,
            }
            for definition in REGISTRY.values()
        ]
        click.echo(orjson.dumps(registry, option=orjson.OPT_INDENT_2).decode())
        return EXIT_OK

    for definition in REGISTRY.values():
        tag = " (exploratory)" if definition.exploratory else ""
        click.echo(f"{definition.id}  {definition.title}{tag}: {definition.claim} [{definition.reference}]")
    return EXIT_OK


def _parse_values(values: str) -> List[Union[int, float]]:
    parsed = []
    for token in values.split(","):
        token = token.strip()
        if not token:
            continue
        try:
            value = orjson.loads(token)
        except orjson.JSONDecodeError as err:
            raise ConfigurationException(f"Sweep value '{token}' is not a number") from err
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigurationException(f"Sweep value '{token}' is not a number")
        parsed.append(value)
    if not parsed:
        raise ConfigurationException("Sweep needs at least one value")
    return parsed


def _sweep_rows(values: Sequence, outcomes: Sequence[RunOutcome]) -> pd.DataFrame:
    rows = []
    previous: Optional[ExperimentResult] = None
    for value, outcome in zip(values, outcomes):
        result = outcome.result
        row = {"value": value, "verdict": result.verdict if result else "error"}
        if result is not None:
            for key, fit in sorted(result.growth_fits.items()):
                row[key] = fit.exponent
        row["convergence"] = final_distance(previous, result) if previous and result else None
        previous = result
        rows.append(row)

    frame = pd.DataFrame(rows)
    ordered = ["value", "verdict"] + [c for c in frame.columns if c not in ("value", "verdict", "convergence")]
    return frame[ordered + ["convergence"]]


def cmd_sweep(
    config_path: Union[str, Path],
    parameter: str,
    values: str,
    out_dir: Union[str, Path],
    experiment: Optional[str] = None,
    jobs: int = 1,
) -> int:
    """Run one experiment once per parameter value and aggregate into sweep.csv."""
    out = Path(out_dir)
    try:
        parsed = _parse_values(values)
        config = load_config(config_path)
        specs = config.resolved()
        if not specs:
            raise ConfigurationException("Config has no experiments to sweep")
        matches = [spec for spec in specs if experiment in (None, spec.name, spec.id)]
        if not matches:
            raise ConfigurationException(f"Experiment '{experiment}' not found in config")
        base = matches[0]
        variants = [with_parameter(base, parameter, value) for value in parsed]
    except LabException as err:
        click.echo(f"error: {err.message}", err=True)
        return EXIT_CONFIG

    started = time.perf_counter()
    outcomes = ExperimentRunner(jobs).run(variants)

    code = EXIT_OK
    for value, outcome in zip(parsed, outcomes):
        if outcome.error is not None:
            click.echo(f"error: {parameter}={value}: {outcome.error.message}", err=True)
            code = _worst(code, _error_code(outcome.error))
        else:
            click.echo(f"{parameter}={value}: {outcome.result.verdict}")
            code = _worst(code, _verdict_code(outcome.result))

    out.mkdir(parents=True, exist_ok=True)
    write_csv(out / "sweep.csv", _sweep_rows(parsed, outcomes))
    results = [outcome.result for outcome in outcomes if outcome.result is not None]
    for index, result in enumerate(results):
        write_json(out / f"sweep_{index}.json", result)

    manifest = RunManifest(
        config_path=str(config_path),
        output_dir=str(out),
        tool_version=SETTINGS.APP_VERSION,
        resolved_specs=variants,
        files={"sweep": ["sweep.csv"] + [f"sweep_{index}.json" for index in range(len(results))]},
        verdicts={f"{parameter}={value}": o.result.verdict for value, o in zip(parsed, outcomes) if o.result},
        timings={f"{parameter}={value}": o.seconds for value, o in zip(parsed, outcomes)},
        total_seconds=time.perf_counter() - started,
    )
    write_manifest(manifest, out)
    return code


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(version=SETTINGS.APP_VERSION, prog_name="loclab")
def cli():
    """Localization laboratory: evolve 1D wave packets and check localization claims."""


@cli.command("run")
@click.argument("config_path", type=click.Path(dir_okay=False))
@click.option("-o", "--out-dir", required=True, type=click.Path(file_okay=False), help="Output directory")
@click.option("--jobs", default=1, show_default=True, type=click.IntRange(min=1), help="Parallel experiments")
@click.pass_context
def run_command(ctx, config_path, out_dir, jobs):
    """Run all experiments of CONFIG_PATH."""
    ctx.exit(cmd_run(config_path, out_dir, jobs))


@cli.command("list")
@click.option("--json", "as_json", is_flag=True, help="Machine-readable registry")
@click.pass_context
def list_command(ctx, as_json):
    """List the registered experiments."""
    ctx.exit(cmd_list(as_json))


@cli.command("sweep")
@click.argument("config_path", type=click.Path(dir_okay=False))
@click.option("--param", "parameter", required=True, help="Dotted path inside the experiment, e.g. propagator.dt")
@click.option("--values", required=True, help="Comma-separated values")
@click.option("-o", "--out-dir", required=True, type=click.Path(file_okay=False), help="Output directory")
@click.option("--experiment", default=None, help="Experiment id or name (default: first in config)")
@click.option("--jobs", default=1, show_default=True, type=click.IntRange(min=1), help="Parallel runs")
@click.pass_context
def sweep_command(ctx, config_path, parameter, values, out_dir, experiment, jobs):
    """Run one experiment of CONFIG_PATH once per parameter value."""
    ctx.exit(cmd_sweep(config_path, parameter, values, out_dir, experiment, jobs))
