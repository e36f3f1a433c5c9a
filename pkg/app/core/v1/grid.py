"""Spatial and momentum discretization.

Positions are ``x_i = x_min + i*dx`` for ``i = 0..n-1`` with ``dx = (x_max - x_min)/n``;
the periodic image of ``x_max`` is ``x_min``. Wavenumbers follow the standard DFT
ordering returned by ``numpy.fft.fftfreq`` scaled by ``2*pi``.

The momentum representation approximates the continuous transform
``phi(k) = (2*pi)**-0.5 * integral f(x) exp(-i*k*x) dx``; with the Riemann-sum
quadrature used everywhere Parseval holds exactly up to roundoff.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Union

import numpy as np
from numpy.typing import NDArray

from app.core.v1.exceptions import NumericalException
from app.core.v1.validators import GridValidator


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class Grid:
    """Uniform periodic lattice on [x_min, x_max) and its conjugate wavenumbers."""

    x_min: float
    x_max: float
    n_points: int

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_points

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def dk(self) -> float:
        return 2.0 * np.pi / (self.n_points * self.dx)

    @property
    def k_max(self) -> float:
        """Nyquist wavenumber pi/dx."""
        return np.pi / self.dx

    @property
    def half_width(self) -> float:
        """Largest radius around the origin that stays inside the grid."""
        return min(abs(self.x_min), abs(self.x_max))

    @cached_property
    def x_values(self) -> NDArray[np.float64]:
        return _frozen(self.x_min + self.dx * np.arange(self.n_points, dtype=np.float64))

    @cached_property
    def k_values(self) -> NDArray[np.float64]:
        return _frozen(2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.dx))

    @cached_property
    def _momentum_phase(self) -> NDArray[np.complex128]:
        # Shift of origin from x_min to 0 in the transform kernel
        return _frozen(np.exp(-1j * self.k_values * self.x_min))

    def same_as(self, other: "Grid") -> bool:
        return (
            self.n_points == other.n_points
            and self.x_min == other.x_min
            and self.x_max == other.x_max
        )

    def __repr__(self) -> str:
        return f"Grid(x_min={self.x_min}, x_max={self.x_max}, n_points={self.n_points})"


def make_grid(x_min: float, x_max: float, n_points: int) -> Grid:
    """Build a validated grid.

    Args:
        x_min (float): Left end of the domain.
        x_max (float): Right end of the domain (periodic image of x_min).
        n_points (int): Number of lattice points, a power of two >= 16.

    Returns:
        Grid: Grid with dx and k_values populated.

    Raises:
        ConfigurationException: For a degenerate domain or an invalid point count.
    """
    x_min, x_max = GridValidator.validate_domain(x_min, x_max)
    n_points = GridValidator.validate_n_points(n_points)
    return Grid(x_min=x_min, x_max=x_max, n_points=n_points)


class _Samples:
    """Shared behaviour of position and momentum samples."""

    grid: Grid
    samples: NDArray[np.complex128]

    def __init__(self, grid: Grid, samples):
        array = np.array(samples, dtype=np.complex128, copy=True).reshape(-1)
        GridValidator.validate_sample_count(grid, array.shape[0])
        if not np.all(np.isfinite(array)):
            raise NumericalException("Wave function contains non-finite samples")
        self.grid = grid
        self.samples = _frozen(array)

    @property
    def measure(self) -> float:
        raise NotImplementedError

    @property
    def density(self) -> NDArray[np.float64]:
        return np.abs(self.samples) ** 2

    def with_samples(self, samples):
        return type(self)(self.grid, samples)

    def scaled(self, factor: complex):
        return type(self)(self.grid, factor * self.samples)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(grid={self.grid!r})"


class WaveFunction(_Samples):
    """Complex amplitudes on the position lattice."""

    @property
    def measure(self) -> float:
        return self.grid.dx


class MomentumWaveFunction(_Samples):
    """Complex amplitudes on the wavenumber lattice, in DFT ordering."""

    @property
    def measure(self) -> float:
        return self.grid.dk

    @property
    def k(self) -> NDArray[np.float64]:
        return self.grid.k_values


AnyWaveFunction = Union[WaveFunction, MomentumWaveFunction]


def inner_product(f: AnyWaveFunction, g: AnyWaveFunction) -> complex:
    """Riemann-sum pairing, antilinear in the first argument.

    Raises:
        ShapeException: If f and g live on different grids or representations.
    """
    GridValidator.validate_same_grid(f, g)
    return complex(np.vdot(f.samples, g.samples) * f.measure)


def l2_norm(f: AnyWaveFunction) -> float:
    return float(np.sqrt(max(inner_product(f, f).real, 0.0)))


def l2_distance(f: AnyWaveFunction, g: AnyWaveFunction) -> float:
    GridValidator.validate_same_grid(f, g)
    return l2_norm(f.with_samples(f.samples - g.samples))


def to_momentum(f: WaveFunction) -> MomentumWaveFunction:
    grid = f.grid
    scale = np.sqrt(grid.n_points / (2.0 * np.pi)) * grid.dx
    spectrum = np.fft.fft(f.samples, norm="ortho") * scale * grid._momentum_phase
    return MomentumWaveFunction(grid, spectrum)


def from_momentum(g: MomentumWaveFunction) -> WaveFunction:
    grid = g.grid
    scale = np.sqrt(grid.n_points / (2.0 * np.pi)) * grid.dx
    samples = np.fft.ifft(g.samples * np.conj(grid._momentum_phase) / scale, norm="ortho")
    return WaveFunction(grid, samples)


def apply_momentum_multiplier(f: WaveFunction, multiplier: NDArray) -> WaveFunction:
    """Multiply by a function of k in momentum space and transform back.

    Origin phases cancel, so the plain unitary DFT pair is used.
    """
    spectrum = np.fft.fft(f.samples, norm="ortho")
    return f.with_samples(np.fft.ifft(spectrum * multiplier, norm="ortho"))


def expectation_x(f: WaveFunction, power: int = 1) -> float:
    """Normalized position moment <x^power>."""
    weight = f.density
    total = weight.sum()
    if total == 0.0:
        return 0.0
    return float(np.sum(f.grid.x_values ** power * weight) / total)


def position_std(f: WaveFunction) -> float:
    mean = expectation_x(f, 1)
    return float(np.sqrt(max(expectation_x(f, 2) - mean ** 2, 0.0)))
