"""Time evolution e^{-iHt}: exact free, split-operator and Crank-Nicolson schemes."""

from typing import List, Literal, Optional, Sequence

import numpy as np
import scipy.sparse as sp
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.sparse.linalg import splu

from app.core.v1.decorators import numerical_guard
from app.core.v1.exceptions import ConfigurationException
from app.core.v1.grid import (
    Grid,
    WaveFunction,
    apply_momentum_multiplier,
    expectation_x,
    position_std,
    to_momentum,
)
from app.core.v1.log_manager import LogManager
from app.core.v1.potentials import eval_potential_grid, is_free, wall_mask
from app.core.v1.states import gaussian_samples
from app.settings.v1.numerics import SETTINGS

logger = LogManager(__name__)

Scheme = Literal["ExactFree", "SplitOperator", "CrankNicolson"]
Boundary = Literal["Periodic", "Dirichlet"]


class PropagatorConfig(BaseModel):
    """Scheme, step and boundary for one evolution."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    scheme: Scheme = "ExactFree"
    dt: float = Field(default_factory=lambda: SETTINGS.DEFAULT_DT, gt=0.0, allow_inf_nan=False)
    m: float = Field(default_factory=lambda: SETTINGS.DEFAULT_MASS, gt=0.0, allow_inf_nan=False)
    boundary: Boundary = "Periodic"

    @model_validator(mode="after")
    def _check_boundary(self):
        if self.scheme != "CrankNicolson" and self.boundary != "Periodic":
            raise ValueError(f"{self.scheme} requires a Periodic boundary")
        return self


class EvolutionResult(BaseModel):
    """Snapshots of one evolution run."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    scheme: Scheme
    times: List[float]
    states: List[WaveFunction]
    warnings: List[str] = Field(default_factory=list)

    @property
    def final(self) -> WaveFunction:
        return self.states[-1]


@numerical_guard
def evolve_free_exact(f: WaveFunction, t: float, m: Optional[float] = None) -> WaveFunction:
    """Free evolution in one shot via the phase e^{-i k^2 t / 2m}."""
    m = SETTINGS.DEFAULT_MASS if m is None else m
    if t == 0.0:
        return f
    return apply_momentum_multiplier(f, np.exp(-1j * f.grid.k_values ** 2 * t / (2.0 * m)))


def free_gaussian_oracle(
    grid: Grid, x0: float, p0: float, sigma: float, m: float, t: float
) -> WaveFunction:
    """Closed-form freely evolved Gaussian.

    Width grows as sigma * sqrt(1 + (t / (2 m sigma^2))^2), center drifts as x0 + p0 t / m.
    """
    x = grid.x_values
    if t == 0.0:
        return WaveFunction(grid, gaussian_samples(x, x0, p0, sigma))

    alpha = 1.0 + 1j * t / (2.0 * m * sigma ** 2)
    shifted = x - x0 - p0 * t / m
    samples = (
        (2.0 * np.pi * sigma ** 2) ** -0.25
        / np.sqrt(alpha)
        * np.exp(-(shifted ** 2) / (4.0 * sigma ** 2 * alpha))
        * np.exp(1j * (p0 * x - p0 ** 2 * t / (2.0 * m)))
    )
    return WaveFunction(grid, samples)


class SplitOperatorStepper:
    """Strang splitting e^{-iV dt/2} e^{-iH0 dt} e^{-iV dt/2} with precomputed phases."""

    def __init__(self, grid: Grid, potential_values: NDArray[np.float64], dt: float, m: float):
        self.grid = grid
        self.dt = dt
        self.half_phase = np.exp(-0.5j * potential_values * dt)
        self.full_phase = self.half_phase ** 2
        self.kinetic_phase = np.exp(-1j * grid.k_values ** 2 * dt / (2.0 * m))

    @numerical_guard
    def advance(self, f: WaveFunction, n_steps: int) -> WaveFunction:
        """Apply n_steps Strang steps, merging adjacent potential half-steps."""
        if n_steps <= 0:
            return f
        psi = f.samples * self.half_phase
        for step in range(n_steps):
            psi = np.fft.ifft(np.fft.fft(psi, norm="ortho") * self.kinetic_phase, norm="ortho")
            psi = psi * (self.full_phase if step < n_steps - 1 else self.half_phase)
        return f.with_samples(psi)


class CrankNicolsonStepper:
    """Cayley step (1 + iH dt/2)^{-1} (1 - iH dt/2) with a 3-point Laplacian.

    Dirichlet runs pin psi = 0 at x_min (the periodic image of x_max) and at every
    point inside the trap walls; those points are removed from the linear system.
    """

    def __init__(
        self,
        grid: Grid,
        potential_values: NDArray[np.float64],
        dt: float,
        m: float,
        boundary: Boundary = "Periodic",
        inactive: Optional[NDArray[np.bool_]] = None,
    ):
        n = grid.n_points
        self.grid = grid
        self.dt = dt

        pinned = np.zeros(n, dtype=bool) if inactive is None else np.array(inactive, dtype=bool)
        if boundary == "Dirichlet":
            pinned[0] = True
        self.active = np.flatnonzero(~pinned)
        if self.active.size == 0:
            raise ConfigurationException("Crank-Nicolson run has no active grid points")

        coupling = -1.0 / (2.0 * m * grid.dx ** 2)
        diagonal = -2.0 * coupling + potential_values
        off = np.full(n - 1, coupling)
        hamiltonian = sp.diags([off, diagonal, off], [-1, 0, 1], shape=(n, n), format="lil")
        if boundary == "Periodic":
            hamiltonian[0, n - 1] = coupling
            hamiltonian[n - 1, 0] = coupling
        hamiltonian = hamiltonian.tocsr()[self.active][:, self.active]

        identity = sp.identity(self.active.size, dtype=np.complex128, format="csc")
        self.forward = (identity - 0.5j * dt * hamiltonian).tocsc()
        self._lu = self._factorize((identity + 0.5j * dt * hamiltonian).tocsc())

    @staticmethod
    @numerical_guard
    def _factorize(matrix):
        return splu(matrix)

    @numerical_guard
    def advance(self, f: WaveFunction, n_steps: int) -> WaveFunction:
        if n_steps <= 0:
            return f
        psi = np.zeros(self.grid.n_points, dtype=np.complex128)
        active = f.samples[self.active]
        for _ in range(n_steps):
            active = self._lu.solve(self.forward @ active)
        psi[self.active] = active
        return f.with_samples(psi)


def step_split_operator(f: WaveFunction, V, dt: float, m: Optional[float] = None) -> WaveFunction:
    m = SETTINGS.DEFAULT_MASS if m is None else m
    stepper = SplitOperatorStepper(f.grid, eval_potential_grid(V, f.grid), dt, m)
    return stepper.advance(f, 1)


def step_crank_nicolson(
    f: WaveFunction, V, dt: float, m: Optional[float] = None, boundary: Boundary = "Periodic"
) -> WaveFunction:
    m = SETTINGS.DEFAULT_MASS if m is None else m
    stepper = _crank_nicolson_for(f.grid, V, dt, m, boundary)
    return stepper.advance(f, 1)


def _crank_nicolson_for(grid: Grid, V, dt: float, m: float, boundary: Boundary) -> CrankNicolsonStepper:
    values = eval_potential_grid(V, grid)
    inactive = None
    if boundary == "Dirichlet":
        # Exact infinite walls replace the finite wall height
        inactive = wall_mask(V, grid)
        values = np.where(inactive, 0.0, values)
    return CrankNicolsonStepper(grid, values, dt, m, boundary, inactive)


def resolve_scheme(config: PropagatorConfig, V) -> PropagatorConfig:
    """ExactFree only applies to V = 0; other potentials fall back to split-operator."""
    if config.scheme == "ExactFree" and not is_free(V):
        logger.info("ExactFree requested with a potential, using SplitOperator", potential=V.kind)
        return config.model_copy(update={"scheme": "SplitOperator"})
    return config


def momentum_cutoff(f: WaveFunction, fraction: Optional[float] = None) -> float:
    """Smallest |k| enclosing the given fraction of momentum mass."""
    fraction = SETTINGS.MOMENTUM_MASS_FRACTION if fraction is None else fraction
    spectrum = to_momentum(f)
    order = np.argsort(np.abs(spectrum.k), kind="stable")
    cumulative = np.cumsum(spectrum.density[order])
    total = cumulative[-1]
    if total == 0.0:
        return 0.0
    index = int(np.searchsorted(cumulative, fraction * total))
    return float(np.abs(spectrum.k[order[min(index, order.size - 1)]]))


def check_padding(grid: Grid, f0: WaveFunction, T: float, m: Optional[float] = None) -> Optional[str]:
    """Warning text when the packet may wrap around the periodic box by time T."""
    m = SETTINGS.DEFAULT_MASS if m is None else m
    offset = abs(expectation_x(f0, 1) - 0.5 * (grid.x_min + grid.x_max))
    sigma_eff = position_std(f0)
    k_max = momentum_cutoff(f0)
    required = offset + SETTINGS.PADDING_SIGMAS * sigma_eff + k_max * abs(T) / m
    available = 0.5 * grid.length
    if available >= required:
        return None
    return (
        f"padding rule violated: half-width {available:.4g} < {required:.4g} "
        f"(offset {offset:.3g}, sigma_eff {sigma_eff:.3g}, k_max {k_max:.3g}, T {T:g})"
    )


def _sample_plan(T: float, observers: Sequence[float]) -> List[float]:
    times = sorted({float(t) for t in observers} | {float(T)}, key=abs)
    for t in times:
        if t != 0.0 and (np.sign(t) != np.sign(T) or abs(t) > abs(T)):
            raise ConfigurationException(f"Sample time {t} lies outside [0, {T}]")
    return times


def evolve(
    f: WaveFunction,
    V,
    T: float,
    config: PropagatorConfig,
    observers: Sequence[float] = (),
) -> EvolutionResult:
    """Evolve f to time T, keeping snapshots at the requested times.

    Stepped schemes report the time actually reached, n*dt, which lies within
    dt/2 of the request. A negative T runs the stepped schemes backwards.

    Args:
        f (WaveFunction): Initial state at t = 0.
        V: Potential model.
        T (float): Final time.
        config (PropagatorConfig): Scheme settings.
        observers (Sequence[float]): Sample times; T is always included.

    Returns:
        EvolutionResult: Snapshots in order of increasing |t|.
    """
    config = resolve_scheme(config, V)
    times = _sample_plan(T, observers)
    warnings: List[str] = []

    if config.boundary == "Periodic":
        warning = check_padding(f.grid, f, T, config.m)
        if warning is not None:
            logger.warning("Padding check failed", scheme=config.scheme, detail=warning)
            warnings.append(warning)

    if config.scheme == "ExactFree":
        states = [evolve_free_exact(f, t, config.m) for t in times]
        return EvolutionResult(scheme=config.scheme, times=times, states=states, warnings=warnings)

    dt = config.dt if T >= 0 else -config.dt
    if config.scheme == "SplitOperator":
        stepper = SplitOperatorStepper(f.grid, eval_potential_grid(V, f.grid), dt, config.m)
    else:
        stepper = _crank_nicolson_for(f.grid, V, dt, config.m, config.boundary)

    reached, states, current, done = [], [], f, 0
    for t in times:
        target = int(round(t / dt))
        current = stepper.advance(current, target - done)
        done = target
        reached.append(target * dt)
        states.append(current)

    logger.debug("Evolution finished", scheme=config.scheme, steps=done, snapshots=len(states))
    return EvolutionResult(scheme=config.scheme, times=reached, states=states, warnings=warnings)
