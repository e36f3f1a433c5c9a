"""Initial wave packets with known analytic properties."""

import math
from typing import Annotated, Literal, Tuple, Union

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter
from scipy.special import eval_hermite

from app.core.v1.exceptions import ConfigurationException
from app.core.v1.grid import Grid, WaveFunction, l2_norm
from app.core.v1.log_manager import LogManager
from app.settings.v1.numerics import SETTINGS

logger = LogManager(__name__)


class _StateModel(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    normalize: bool = Field(default=True, description="Rescale to unit L2 norm")


class Gaussian(_StateModel):
    """(2 pi sigma^2)^(-1/4) exp(-(x - x0)^2 / (4 sigma^2) + i p0 x)."""

    kind: Literal["Gaussian"] = "Gaussian"
    x0: float = Field(default=0.0, allow_inf_nan=False)
    p0: float = Field(default=0.0, allow_inf_nan=False)
    sigma: float = Field(gt=0.0, allow_inf_nan=False)


class Bump(_StateModel):
    """C-infinity mollifier exp(-1/(1 - u^2)), u = (x - center)/radius, zero for |u| >= 1."""

    kind: Literal["Bump"] = "Bump"
    center: float = Field(default=0.0, allow_inf_nan=False)
    radius: float = Field(gt=0.0, allow_inf_nan=False)


class TruncatedGaussian(_StateModel):
    """Gaussian at rest, hard-zeroed where |x - x0| > cutoff."""

    kind: Literal["TruncatedGaussian"] = "TruncatedGaussian"
    x0: float = Field(default=0.0, allow_inf_nan=False)
    sigma: float = Field(gt=0.0, allow_inf_nan=False)
    cutoff: float = Field(gt=0.0, allow_inf_nan=False)


class PowerTail(_StateModel):
    """(1 + x^2)^(-p/2)."""

    kind: Literal["PowerTail"] = "PowerTail"
    p: float = Field(ge=1.0, allow_inf_nan=False)


class DeltaApprox(_StateModel):
    """Narrow Gaussian of width epsilon."""

    kind: Literal["DeltaApprox"] = "DeltaApprox"
    x0: float = Field(default=0.0, allow_inf_nan=False)
    epsilon: float = Field(gt=0.0, allow_inf_nan=False)


class HermiteGaussian(_StateModel):
    """Oscillator eigenfunction H_n(x / (sqrt(2) sigma)) exp(-x^2 / (4 sigma^2))."""

    kind: Literal["HermiteGaussian"] = "HermiteGaussian"
    n: int = Field(ge=0)
    sigma: float = Field(gt=0.0, allow_inf_nan=False)


StateSpec = Annotated[
    Union[Gaussian, Bump, TruncatedGaussian, PowerTail, DeltaApprox, HermiteGaussian],
    Field(discriminator="kind"),
]

STATE_ADAPTER = TypeAdapter(StateSpec)


def characteristic_width(spec) -> float:
    """Smallest length scale the grid must resolve."""
    if isinstance(spec, (Gaussian, TruncatedGaussian)):
        return spec.sigma
    if isinstance(spec, Bump):
        return spec.radius
    if isinstance(spec, PowerTail):
        return 1.0
    if isinstance(spec, DeltaApprox):
        return spec.epsilon
    if isinstance(spec, HermiteGaussian):
        return spec.sigma / math.sqrt(spec.n + 1)
    raise ConfigurationException(f"Unknown state kind: {type(spec).__name__}")


def center(spec) -> float:
    if isinstance(spec, (Gaussian, TruncatedGaussian, DeltaApprox)):
        return spec.x0
    if isinstance(spec, Bump):
        return spec.center
    return 0.0


def support(spec) -> Tuple[float, float]:
    """Interval that has to fit inside the grid: exact support or the core."""
    middle = center(spec)
    if isinstance(spec, Bump):
        half = spec.radius
    elif isinstance(spec, TruncatedGaussian):
        half = spec.cutoff
    else:
        half = characteristic_width(spec)
    return middle - half, middle + half


def gaussian_samples(x: NDArray[np.float64], x0: float, p0: float, sigma: float) -> NDArray[np.complex128]:
    envelope = (2.0 * np.pi * sigma ** 2) ** -0.25 * np.exp(-((x - x0) ** 2) / (4.0 * sigma ** 2))
    return envelope * np.exp(1j * p0 * x)


def _bump_samples(x: NDArray[np.float64], spec: Bump) -> NDArray[np.float64]:
    u = (x - spec.center) / spec.radius
    values = np.zeros_like(x)
    inside = np.abs(u) < 1.0
    values[inside] = np.exp(-1.0 / (1.0 - u[inside] ** 2))
    return values


def _hermite_samples(x: NDArray[np.float64], spec: HermiteGaussian) -> NDArray[np.float64]:
    xi = x / (math.sqrt(2.0) * spec.sigma)
    norm = (2.0 ** spec.n * math.factorial(spec.n)) ** -0.5 * (2.0 * np.pi * spec.sigma ** 2) ** -0.25
    return norm * eval_hermite(spec.n, xi) * np.exp(-(xi ** 2) / 2.0)


def _raw_samples(spec, x: NDArray[np.float64]) -> NDArray:
    if isinstance(spec, Gaussian):
        return gaussian_samples(x, spec.x0, spec.p0, spec.sigma)
    if isinstance(spec, Bump):
        return _bump_samples(x, spec)
    if isinstance(spec, TruncatedGaussian):
        values = gaussian_samples(x, spec.x0, 0.0, spec.sigma)
        values[np.abs(x - spec.x0) > spec.cutoff] = 0.0
        return values
    if isinstance(spec, PowerTail):
        return (1.0 + x ** 2) ** (-spec.p / 2.0)
    if isinstance(spec, DeltaApprox):
        return gaussian_samples(x, spec.x0, 0.0, spec.epsilon)
    if isinstance(spec, HermiteGaussian):
        return _hermite_samples(x, spec)
    raise ConfigurationException(f"Unknown state kind: {type(spec).__name__}")


def build_state(spec, grid: Grid) -> WaveFunction:
    """Sample a StateSpec on a grid.

    Args:
        spec: One of the StateSpec models.
        grid (Grid): Target grid.

    Returns:
        WaveFunction: Sampled state, unit norm when spec.normalize is set.

    Raises:
        ConfigurationException: If the state is under-resolved or does not fit the grid.
    """
    width = characteristic_width(spec)
    required = SETTINGS.MIN_POINTS_PER_WIDTH * grid.dx
    if width < required * (1.0 - 1e-9):
        raise ConfigurationException(
            f"{spec.kind} width {width:g} under-resolved: needs >= {required:g} "
            f"({SETTINGS.MIN_POINTS_PER_WIDTH} points of dx={grid.dx:g})"
        )

    lo, hi = support(spec)
    if lo < grid.x_min or hi > grid.x_max:
        raise ConfigurationException(
            f"{spec.kind} support [{lo:g}, {hi:g}] exceeds grid [{grid.x_min:g}, {grid.x_max:g}]"
        )

    state = WaveFunction(grid, _raw_samples(spec, grid.x_values))
    if not spec.normalize:
        return state

    norm = l2_norm(state)
    if norm == 0.0:
        raise ConfigurationException(f"{spec.kind} vanishes on every grid point")

    logger.debug("State built", kind=spec.kind, n_points=grid.n_points, raw_norm=norm)
    return state.scaled(1.0 / norm)
