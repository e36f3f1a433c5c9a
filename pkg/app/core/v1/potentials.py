"""Catalog of bounded potentials and their Kato constants."""

from typing import Annotated, List, Literal, Tuple, Union

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, model_validator

from app.core.v1.exceptions import UnsupportedException
from app.core.v1.grid import Grid
from app.settings.v1.numerics import SETTINGS


class _PotentialModel(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class FreePotential(_PotentialModel):
    """V(x) = 0."""

    kind: Literal["Free"] = "Free"


class RectangularBarrier(_PotentialModel):
    """V0 on [a, b), zero elsewhere."""

    kind: Literal["RectangularBarrier"] = "RectangularBarrier"
    a: float = Field(allow_inf_nan=False, description="Left edge")
    b: float = Field(allow_inf_nan=False, description="Right edge")
    v0: float = Field(gt=0.0, allow_inf_nan=False, description="Barrier height")

    @model_validator(mode="after")
    def _check_edges(self):
        if not self.a < self.b:
            raise ValueError(f"barrier requires a < b, got a={self.a}, b={self.b}")
        return self


class DoubleWallTrap(_PotentialModel):
    """Two walls of height v_wall on [a1, a2) and [a3, a4).

    Region I lies left of a1, region III between a2 and a3, region V right of a4.
    """

    kind: Literal["DoubleWallTrap"] = "DoubleWallTrap"
    a1: float = Field(allow_inf_nan=False)
    a2: float = Field(allow_inf_nan=False)
    a3: float = Field(allow_inf_nan=False)
    a4: float = Field(allow_inf_nan=False)
    v_wall: float = Field(
        default_factory=lambda: SETTINGS.WALL_HEIGHT,
        gt=0.0,
        allow_inf_nan=False,
        description="Finite stand-in for an infinite wall",
    )

    @model_validator(mode="after")
    def _check_order(self):
        if not (self.a1 < self.a2 < self.a3 < self.a4):
            raise ValueError(
                f"trap requires a1 < a2 < a3 < a4, got {self.a1}, {self.a2}, {self.a3}, {self.a4}"
            )
        return self

    def barriers(self) -> Tuple[RectangularBarrier, RectangularBarrier]:
        return (
            RectangularBarrier(a=self.a1, b=self.a2, v0=self.v_wall),
            RectangularBarrier(a=self.a3, b=self.a4, v0=self.v_wall),
        )

    @property
    def region_iii(self) -> Tuple[float, float]:
        return self.a2, self.a3


class SmoothBounded(_PotentialModel):
    """C-infinity bump with bounded derivatives."""

    kind: Literal["SmoothBounded"] = "SmoothBounded"
    form: Literal["gaussian", "sech2"] = "gaussian"
    amplitude: float = Field(allow_inf_nan=False)
    center: float = Field(default=0.0, allow_inf_nan=False)
    width: float = Field(gt=0.0, allow_inf_nan=False)


class Tabulated(_PotentialModel):
    """Samples V(x_min + j*dx), looked up by nearest neighbour."""

    kind: Literal["Tabulated"] = "Tabulated"
    x_min: float = Field(allow_inf_nan=False)
    dx: float = Field(gt=0.0, allow_inf_nan=False)
    samples: List[Annotated[float, Field(allow_inf_nan=False)]] = Field(min_length=1)


PotentialSpec = Annotated[
    Union[FreePotential, RectangularBarrier, DoubleWallTrap, SmoothBounded, Tabulated],
    Field(discriminator="kind"),
]

POTENTIAL_ADAPTER = TypeAdapter(PotentialSpec)


def _barrier_values(x: NDArray, a: float, b: float, height: float) -> NDArray:
    # Right-limit convention at jumps
    return np.where((x >= a) & (x < b), height, 0.0)


def _evaluate(spec, x: NDArray[np.float64]) -> NDArray[np.float64]:
    if isinstance(spec, FreePotential):
        return np.zeros_like(x)

    if isinstance(spec, RectangularBarrier):
        return _barrier_values(x, spec.a, spec.b, spec.v0)

    if isinstance(spec, DoubleWallTrap):
        left, right = spec.barriers()
        return _barrier_values(x, left.a, left.b, left.v0) + _barrier_values(
            x, right.a, right.b, right.v0
        )

    if isinstance(spec, SmoothBounded):
        u = (x - spec.center) / spec.width
        if spec.form == "gaussian":
            return spec.amplitude * np.exp(-0.5 * u ** 2)
        return spec.amplitude / np.cosh(np.clip(u, -350.0, 350.0)) ** 2

    if isinstance(spec, Tabulated):
        table = np.asarray(spec.samples, dtype=np.float64)
        index = np.floor((x - spec.x_min) / spec.dx + 0.5).astype(np.int64)
        return table[np.clip(index, 0, table.size - 1)]

    raise UnsupportedException(f"Unknown potential kind: {type(spec).__name__}")


def eval_potential(spec, x: float) -> float:
    """Value of V at a single position."""
    return float(_evaluate(spec, np.asarray([x], dtype=np.float64))[0])


def eval_potential_grid(spec, grid: Grid) -> NDArray[np.float64]:
    """Vectorized V on every grid point."""
    return _evaluate(spec, grid.x_values)


def wall_mask(spec, grid: Grid) -> NDArray[np.bool_]:
    """Grid points inside the closed trap walls; all False for other potentials."""
    x = grid.x_values
    if not isinstance(spec, DoubleWallTrap):
        return np.zeros(x.shape, dtype=bool)
    return ((x >= spec.a1) & (x <= spec.a2)) | ((x >= spec.a3) & (x <= spec.a4))


def is_free(spec) -> bool:
    return isinstance(spec, FreePotential)


def kato_constants(spec) -> Tuple[float, float]:
    """Relative-bound constants (a, b) with ||Vf|| <= a*||H0 f|| + b*||f||.

    Every catalog potential is bounded, so a = 0 and b = sup|V|.

    Raises:
        UnsupportedException: If the potential is not in the bounded catalog.
    """
    if isinstance(spec, FreePotential):
        return 0.0, 0.0
    if isinstance(spec, RectangularBarrier):
        return 0.0, spec.v0
    if isinstance(spec, DoubleWallTrap):
        return 0.0, spec.v_wall
    if isinstance(spec, SmoothBounded):
        # Both forms peak at the center with value amplitude
        return 0.0, abs(spec.amplitude)
    if isinstance(spec, Tabulated):
        return 0.0, float(np.max(np.abs(spec.samples)))

    raise UnsupportedException(f"No Kato bound for potential kind: {type(spec).__name__}")
