"""Result files: CSV time series, JSON documents and SVG plots."""

from pathlib import Path
from typing import Dict, List, Sequence, Union

import matplotlib
import numpy as np
import orjson
import pandas as pd
from matplotlib.figure import Figure
from pydantic import BaseModel

from app.core.v1.experiment_schema import ExperimentResult, RunManifest
from app.core.v1.log_manager import LogManager
from app.core.v1.operators import NormReport

logger = LogManager(__name__)

CSV_COLUMNS = ["t", "l2", "d1", "d2", "s1", "s2", "tail_R1", "tail_R2", "energy"]
FLOAT_FORMAT = "%.17g"
JSON_OPTIONS = orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS | orjson.OPT_SERIALIZE_NUMPY
DENSITY_FLOOR = 1e-300

matplotlib.rcParams["svg.hashsalt"] = "loclab"
matplotlib.rcParams["svg.fonttype"] = "none"


def reports_frame(reports: Sequence[NormReport], radii: Sequence[float]) -> pd.DataFrame:
    """NormReports as a frame with the fixed CSV column order."""
    r1, r2 = float(radii[0]), float(radii[1])
    rows = [
        {
            "t": report.t,
            "l2": report.l2,
            "d1": report.d_norms.get(1, np.nan),
            "d2": report.d_norms.get(2, np.nan),
            "s1": report.s1,
            "s2": report.s2,
            "tail_R1": report.tail_mass.get(r1, np.nan),
            "tail_R2": report.tail_mass.get(r2, np.nan),
            "energy": report.energy,
        }
        for report in reports
    ]
    return pd.DataFrame(rows, columns=CSV_COLUMNS)


def write_csv(path: Path, frame: pd.DataFrame) -> Path:
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return path


def write_json(path: Path, payload: Union[BaseModel, Dict, List]) -> Path:
    if isinstance(payload, BaseModel):
        payload = payload.model_dump(mode="json")
    path.write_bytes(orjson.dumps(payload, option=JSON_OPTIONS) + b"\n")
    return path


def plot_density(path: Path, result: ExperimentResult) -> Path:
    """|psi|^2 snapshots of the primary run on a log scale."""
    figure = Figure(figsize=(7.0, 4.5))
    axes = figure.add_subplot(1, 1, 1)
    times, states = result.snapshots.get("primary", ([], []))
    for t, state in zip(times, states):
        density = np.maximum(state.density, DENSITY_FLOOR)
        axes.semilogy(state.grid.x_values, density, linewidth=0.8, label=f"t = {t:g}")
    axes.set_xlabel("x")
    axes.set_ylabel("|psi|^2")
    axes.set_ylim(bottom=1e-30)
    axes.set_title(f"{result.name}: density")
    if times:
        axes.legend(fontsize="small")
    figure.savefig(path, format="svg", metadata={"Date": None})
    return path


def plot_norms(path: Path, result: ExperimentResult) -> Path:
    """Norm functionals against t on log-log axes."""
    figure = Figure(figsize=(7.0, 4.5))
    axes = figure.add_subplot(1, 1, 1)
    frame = reports_frame(result.reports, result.provenance.analysis.tail_radii)
    positive = frame[frame["t"] > 0.0]
    if positive.empty:
        axes.text(0.5, 0.5, "no positive sample times", ha="center", va="center")
    else:
        for column in ("d1", "d2", "s1", "s2"):
            axes.loglog(positive["t"], positive[column], marker="o", markersize=3, label=column)
        axes.legend(fontsize="small")
    axes.set_xlabel("t")
    axes.set_ylabel("norm")
    axes.set_title(f"{result.name}: norm growth")
    figure.savefig(path, format="svg", metadata={"Date": None})
    return path


def write_experiment_outputs(result: ExperimentResult, out_dir: Path) -> List[str]:
    """Write CSV, JSON and SVG files for one result; returns the file names."""
    out_dir.mkdir(parents=True, exist_ok=True)
    radii = result.provenance.analysis.tail_radii
    name = result.name
    files = [
        write_csv(out_dir / f"{name}.csv", reports_frame(result.reports, radii)),
        write_json(out_dir / f"{name}.json", result),
        plot_density(out_dir / f"{name}_density.svg", result),
        plot_norms(out_dir / f"{name}_norms.svg", result),
    ]
    for label, reports in sorted(result.runs.items()):
        files.append(write_csv(out_dir / f"{name}.{label}.csv", reports_frame(reports, radii)))

    logger.info("Outputs written", experiment=name, files=len(files), out_dir=str(out_dir))
    return [path.name for path in files]


def write_manifest(manifest: RunManifest, out_dir: Path) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    return write_json(out_dir / "manifest.json", manifest)
