"""Numerical configuration settings."""

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class NumericsSettings(BaseSettings):
    """Defaults for discretization, propagation and analysis."""

    # Analysis floors
    LOCLAB_FLOOR: float = Field(
        default=1e-13, gt=0.0, description="Relative amplitude floor (fraction of max|f|)"
    )

    # Physics and discretization
    DEFAULT_MASS: float = Field(
        default=1.0, gt=0.0, description="Particle mass in units with hbar = 1"
    )
    DEFAULT_DT: float = Field(
        default=1e-3, gt=0.0, description="Time step for stepped schemes"
    )
    MIN_POINTS_PER_WIDTH: int = Field(
        default=4, ge=1, description="Grid points required across a state's characteristic width"
    )

    # Norms
    N_MAX: int = Field(
        default=3, ge=0, description="Highest D_n order evaluated by default"
    )

    # Padding rule
    PADDING_SIGMAS: float = Field(
        default=5.0, gt=0.0, description="Position widths kept inside the grid"
    )
    MOMENTUM_MASS_FRACTION: float = Field(
        default=0.9999, gt=0.0, lt=1.0, description="Momentum mass defining k_max"
    )

    # Potentials
    WALL_HEIGHT: float = Field(
        default=1e4, gt=0.0, description="Finite stand-in for infinite trap walls"
    )

    # Verdicts and classification
    EXPONENT_SLACK: float = Field(
        default=0.2, ge=0.0, description="Slack added to theoretical growth exponents"
    )
    TIE_TOLERANCE: float = Field(
        default=0.10, ge=0.0, description="Relative residual gap below which falloff is undetermined"
    )
    RESOLVED_MOMENTUM_FRACTION: float = Field(
        default=0.25, gt=0.0, le=1.0,
        description="Share of the grid k_max a far-field fit window may reach at group velocity x / t",
    )

    model_config = SettingsConfigDict(env_file="app/env/v1/numerics.env", extra="ignore")


# Create settings instance
SETTINGS = NumericsSettings()
