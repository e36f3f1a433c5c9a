"""Input types for the experiments API."""

from typing import Any, Dict

from pydantic import BaseModel, Field


class ConfigPayload(BaseModel):
    """Request body holding a lab config document."""

    config: Dict[str, Any] = Field(
        description="Lab config with a shared grid and the experiment list"
    )


class RunRequest(ConfigPayload):
    """Request body for running the experiments of a config."""

    jobs: int = Field(
        default=1,
        ge=1,
        description="Experiments run in parallel (capped by MAX_JOBS)"
    )
