"""Output types for the experiments API."""

from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from app.core.v1.analysis import GrowthFit
from app.core.v1.experiment_schema import ExperimentResult, Verdict


class ExperimentInfo(BaseModel):
    """Registry entry of one experiment."""

    id: str = Field(description="Experiment identifier, E1 to E7")
    title: str = Field(description="Short title")
    claim: str = Field(description="Claim checked by the experiment")
    reference: str = Field(description="Theoretical result behind the claim")
    exploratory: bool = Field(description="Exploratory experiments never fail, only flag")


class ExperimentListResponse(BaseModel):
    """Response schema for the experiment registry."""

    experiments: List[ExperimentInfo]
    total: int


class ValidationResponse(BaseModel):
    """Response schema for config validation."""

    valid: bool = True
    experiments: List[str] = Field(description="Resolved experiment names in config order")
    grid_points: Dict[str, int] = Field(description="Grid size per experiment")


class RunSummary(BaseModel):
    """Verdict line of one experiment."""

    name: str
    verdict: Optional[Verdict] = Field(default=None, description="None when the run aborted")
    growth_fits: Dict[str, GrowthFit] = Field(default_factory=dict)
    warnings: List[str] = Field(default_factory=list)
    error: Optional[str] = None
    seconds: float


class RunResponse(BaseModel):
    """Response schema for a run: summaries plus full results."""

    summaries: List[RunSummary]
    results: List[ExperimentResult]
    total_seconds: float
