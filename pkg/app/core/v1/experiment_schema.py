"""Experiment configuration and result models."""

from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PrivateAttr,
    ValidationError,
    field_validator,
    model_validator,
)

from app.core.v1.analysis import FalloffClassification, GrowthFit
from app.core.v1.exceptions import ConfigurationException
from app.core.v1.grid import Grid, WaveFunction, make_grid
from app.core.v1.operators import NormReport
from app.core.v1.potentials import FreePotential, PotentialSpec
from app.core.v1.propagators import PropagatorConfig
from app.core.v1.states import StateSpec
from app.settings.v1.numerics import SETTINGS

ExperimentId = Literal["E1", "E2", "E3", "E4", "E5", "E6", "E7"]
Verdict = Literal["pass", "fail", "flagged"]


class _ConfigModel(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class GridParams(_ConfigModel):
    """Grid section of a config."""

    x_min: float
    x_max: float
    n_points: int

    @model_validator(mode="after")
    def _check_grid(self):
        try:
            make_grid(self.x_min, self.x_max, self.n_points)
        except ConfigurationException as err:
            raise ValueError(err.message) from err
        return self

    def build(self) -> Grid:
        return make_grid(self.x_min, self.x_max, self.n_points)


class LabeledState(_ConfigModel):
    label: str = Field(min_length=1, pattern=r"^[A-Za-z0-9_\-]+$")
    state: StateSpec


class LabeledPotential(_ConfigModel):
    label: str = Field(min_length=1, pattern=r"^[A-Za-z0-9_\-]+$")
    potential: PotentialSpec


class AnalysisParams(_ConfigModel):
    """Windows, floors and radii used when instrumenting a run."""

    tail_radii: Tuple[float, float] = Field(default=(1.0, 2.0), description="Radii for tail_R1, tail_R2")
    n_max: int = Field(default_factory=lambda: max(SETTINGS.N_MAX, 2), ge=2, le=6)
    fit_window: Optional[Tuple[float, float]] = Field(default=None, description="Falloff window [R_lo, R_hi]")
    control_window: Optional[Tuple[float, float]] = Field(default=None, description="Falloff window for the control state")
    core_window: Optional[Tuple[float, float]] = Field(default=None, description="Interval [x_lo, x_hi] for modulus flatness")
    growth_window: Tuple[float, float] = Field(default=(1.0, 50.0))
    floor: Optional[float] = Field(default=None, gt=0.0, description="Relative amplitude floor")
    mass_floor: float = Field(default=1e-12, gt=0.0, description="Absolute probability floor")
    support_radius: Optional[float] = Field(default=None, gt=0.0)
    margin: float = Field(default=1.0, gt=0.0)
    region: Optional[Tuple[float, float]] = Field(default=None, description="Region expected to stay populated or empty")
    track_s3: bool = False
    corroborate: bool = Field(default=False, description="Repeat trap runs with finite walls")

    @field_validator("tail_radii", "growth_window", "fit_window", "control_window", "core_window", "region")
    @classmethod
    def _ordered(cls, value):
        if value is not None and not value[0] < value[1]:
            raise ValueError(f"bounds must be increasing, got {list(value)}")
        return value

    @property
    def resolved_floor(self) -> float:
        return SETTINGS.LOCLAB_FLOOR if self.floor is None else self.floor


class Thresholds(_ConfigModel):
    """Verdict thresholds."""

    exponent_slack: float = Field(default_factory=lambda: SETTINGS.EXPONENT_SLACK, ge=0.0)
    order_target: float = Field(default=2.0, gt=0.0)
    order_tolerance: float = Field(default=0.2, ge=0.0)
    confinement_floor: float = Field(default=1e-10, gt=0.0)
    poly_order_range: Tuple[float, float] = (1.0, 3.0)


class ExperimentSpec(_ConfigModel):
    """One registered scenario with all of its parameters."""

    id: ExperimentId
    label: Optional[str] = None
    grid: Optional[GridParams] = None
    state: StateSpec
    potential: PotentialSpec = Field(default_factory=FreePotential)
    propagator: PropagatorConfig = Field(default_factory=PropagatorConfig)
    sample_times: List[float] = Field(min_length=1)
    analysis: AnalysisParams = Field(default_factory=AnalysisParams)
    thresholds: Thresholds = Field(default_factory=Thresholds)
    extra_states: List[LabeledState] = Field(default_factory=list)
    extra_potentials: List[LabeledPotential] = Field(default_factory=list)

    @field_validator("sample_times")
    @classmethod
    def _check_times(cls, value: List[float]) -> List[float]:
        if any(t < 0.0 for t in value):
            raise ValueError("sample times must be non-negative")
        return sorted(set(value))

    @property
    def name(self) -> str:
        return self.id if self.label is None else f"{self.id}-{self.label}"

    @property
    def final_time(self) -> float:
        return max(self.sample_times)


class LabConfig(_ConfigModel):
    """Top-level JSON config: a shared grid plus the experiment list."""

    grid: GridParams
    experiments: List[ExperimentSpec] = Field(default_factory=list)

    @model_validator(mode="after")
    def _unique_names(self):
        names = [spec.name for spec in self.experiments]
        duplicates = sorted({name for name in names if names.count(name) > 1})
        if duplicates:
            raise ValueError(f"duplicate experiment names: {duplicates}; set a distinct label")
        return self

    def resolved(self) -> List[ExperimentSpec]:
        """Experiments with the shared grid filled in where no override is given."""
        return [
            spec if spec.grid is not None else spec.model_copy(update={"grid": self.grid})
            for spec in self.experiments
        ]


class TimedClassification(BaseModel):
    run: str
    t: float
    classification: FalloffClassification


class ExperimentResult(BaseModel):
    """Time series, fits and verdict of one experiment."""

    id: ExperimentId
    name: str
    claim: str
    verdict: Verdict
    exploratory: bool = False
    reports: List[NormReport]
    runs: Dict[str, List[NormReport]] = Field(default_factory=dict)
    classifications: List[TimedClassification] = Field(default_factory=list)
    growth_fits: Dict[str, GrowthFit] = Field(default_factory=dict)
    metrics: Dict[str, Any] = Field(default_factory=dict)
    warnings: List[str] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)
    provenance: ExperimentSpec

    _snapshots: Dict[str, Tuple[List[float], List[WaveFunction]]] = PrivateAttr(default_factory=dict)

    @property
    def snapshots(self) -> Dict[str, Tuple[List[float], List[WaveFunction]]]:
        return self._snapshots

    @property
    def final_state(self) -> Optional[WaveFunction]:
        primary = self._snapshots.get("primary")
        return primary[1][-1] if primary else None


class RunManifest(BaseModel):
    """Index of one CLI run, written last."""

    config_path: Optional[str]
    output_dir: str
    tool_version: str
    resolved_specs: List[ExperimentSpec]
    files: Dict[str, List[str]] = Field(default_factory=dict)
    verdicts: Dict[str, Verdict] = Field(default_factory=dict)
    timings: Dict[str, float] = Field(default_factory=dict, description="Wall-clock seconds per experiment")
    total_seconds: float = 0.0


def with_parameter(spec: ExperimentSpec, path: str, value: Any) -> ExperimentSpec:
    """Copy of spec with the dotted path (e.g. propagator.dt) set to value.

    Raises:
        ConfigurationException: If the path does not exist or the result fails validation.
    """
    document = spec.model_dump(mode="json")
    parts = path.split(".")
    node = document
    for part in parts[:-1]:
        if isinstance(node, list) and part.isdigit() and int(part) < len(node):
            node = node[int(part)]
        elif isinstance(node, dict) and isinstance(node.get(part), (dict, list)):
            node = node[part]
        else:
            raise ConfigurationException(f"Unknown parameter path '{path}' for {spec.name}")

    leaf = parts[-1]
    if isinstance(node, list) and leaf.isdigit() and int(leaf) < len(node):
        node[int(leaf)] = value
    elif isinstance(node, dict) and leaf in node:
        node[leaf] = value
    else:
        raise ConfigurationException(f"Unknown parameter path '{path}' for {spec.name}")

    try:
        return ExperimentSpec.model_validate(document)
    except ValidationError as err:
        first = err.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise ConfigurationException(f"{path}={value!r} is invalid: {location}: {first['msg']}") from err
