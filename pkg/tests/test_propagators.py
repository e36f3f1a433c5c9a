"""
Tests de los esquemas de evolución temporal.
"""

import inspect
from typing import Optional

import numpy as np
import pytest
from pydantic import ValidationError

from app.core.v1.exceptions import ConfigurationException
from app.core.v1.grid import WaveFunction, inner_product, l2_distance, l2_norm, make_grid
from app.core.v1.operators import energy, interval_mass
from app.core.v1.potentials import (
    DoubleWallTrap,
    FreePotential,
    RectangularBarrier,
    SmoothBounded,
    eval_potential_grid,
)
from app.core.v1.propagators import (
    CrankNicolsonStepper,
    PropagatorConfig,
    SplitOperatorStepper,
    check_padding,
    evolve,
    evolve_free_exact,
    free_gaussian_oracle,
    resolve_scheme,
    step_crank_nicolson,
    step_split_operator,
)
from app.core.v1.states import Bump, Gaussian, build_state


@pytest.mark.unit
class TestExactFree:
    """Tests de la evolución libre exacta."""

    def test_matches_gaussian_oracle(self, moving_gaussian, standard_grid):
        """Test contra la solución cerrada de la gaussiana libre."""
        evolved = evolve_free_exact(moving_gaussian, 2.0)
        oracle = free_gaussian_oracle(standard_grid, -2.0, 1.5, 1.0, 1.0, 2.0)
        assert l2_distance(evolved, oracle) < 1e-10

    def test_oracle_at_zero(self, moving_gaussian, standard_grid):
        """Test que el oráculo en t = 0 es el estado inicial."""
        oracle = free_gaussian_oracle(standard_grid, -2.0, 1.5, 1.0, 1.0, 0.0)
        assert l2_distance(oracle, moving_gaussian) < 1e-12

    def test_heavier_mass_spreads_slower(self, gaussian_state, standard_grid):
        """Test de la dependencia en la masa."""
        evolved = evolve_free_exact(gaussian_state, 2.0, m=2.0)
        oracle = free_gaussian_oracle(standard_grid, 0.0, 0.0, 1.0, 2.0, 2.0)
        assert l2_distance(evolved, oracle) < 1e-10

    def test_evolve_samples_every_time(self, moving_gaussian):
        """Test que evolve devuelve una instantánea por tiempo pedido."""
        result = evolve(moving_gaussian, FreePotential(), 2.0, PropagatorConfig(), [0.0, 0.5, 1.0])
        assert result.times == [0.0, 0.5, 1.0, 2.0]
        assert result.scheme == "ExactFree"
        assert result.states[0] is moving_gaussian
        assert result.warnings == []

    def test_group_property(self, moving_gaussian):
        """Test que evolucionar t1 y luego t2 equivale a evolucionar t1 + t2."""
        two_legs = evolve_free_exact(evolve_free_exact(moving_gaussian, 0.7), 1.3)
        assert l2_distance(two_legs, evolve_free_exact(moving_gaussian, 2.0)) < 1e-12

    @pytest.mark.parametrize("function", [evolve_free_exact, step_split_operator, step_crank_nicolson])
    def test_mass_is_optional(self, function):
        """Test que la masa se anota como Optional[float]."""
        assert inspect.signature(function).parameters["m"].annotation == Optional[float]


@pytest.mark.unit
class TestSplitOperator:
    """Tests del esquema split-operator."""

    def test_norm_is_conserved(self, moving_gaussian):
        """Test de unitariedad del paso de Strang."""
        config = PropagatorConfig(scheme="SplitOperator", dt=0.01)
        potential = RectangularBarrier(a=1.0, b=2.0, v0=3.0)
        result = evolve(moving_gaussian, potential, 1.0, config)
        assert l2_norm(result.final) == pytest.approx(1.0, abs=1e-12)

    def test_free_split_operator_is_exact(self, moving_gaussian):
        """Test que sin potencial el esquema coincide con la evolución exacta."""
        config = PropagatorConfig(scheme="SplitOperator", dt=0.1)
        result = evolve(moving_gaussian, FreePotential(), 1.0, config)
        assert l2_distance(result.final, evolve_free_exact(moving_gaussian, 1.0)) < 1e-10

    def test_second_order_self_convergence(self, standard_grid):
        """Test de convergencia de orden dos al reducir dt a la mitad."""
        f = build_state(Gaussian(x0=-3.0, p0=1.0, sigma=1.0), standard_grid)
        potential = SmoothBounded(amplitude=1.0, width=1.0)
        finals = [
            evolve(f, potential, 1.0, PropagatorConfig(scheme="SplitOperator", dt=dt)).final
            for dt in (0.05, 0.025, 0.0125)
        ]
        coarse = l2_distance(finals[0], finals[1])
        fine = l2_distance(finals[1], finals[2])
        assert 3.0 < coarse / fine < 5.0

    def test_time_reversal(self, standard_grid):
        """Test que evolucionar hacia atrás recupera el estado inicial."""
        f = build_state(Gaussian(x0=-3.0, p0=1.0, sigma=1.0), standard_grid)
        potential = SmoothBounded(form="sech2", amplitude=1.0, width=1.0)
        config = PropagatorConfig(scheme="SplitOperator", dt=0.01)

        forward = evolve(f, potential, 0.5, config)
        backward = evolve(forward.final, potential, -0.5, config)

        assert backward.times == [pytest.approx(-0.5)]
        assert l2_distance(backward.final, f) < 1e-10

    def test_energy_drift(self, standard_grid):
        """Test que la energía se conserva con dt pequeño."""
        f = build_state(Gaussian(x0=-3.0, p0=1.0, sigma=1.0), standard_grid)
        potential = SmoothBounded(amplitude=0.5, width=1.0)
        result = evolve(f, potential, 2.0, PropagatorConfig(scheme="SplitOperator", dt=1e-3))

        start = energy(f, potential)
        assert abs(energy(result.final, potential) - start) / abs(start) < 1e-5

    def test_reports_reached_time(self, gaussian_state):
        """Test que se reporta el tiempo realmente alcanzado n*dt."""
        config = PropagatorConfig(scheme="SplitOperator", dt=1e-3)
        result = evolve(gaussian_state, SmoothBounded(amplitude=1.0, width=1.0), 0.0104, config)
        assert result.times[-1] == pytest.approx(0.010)
        assert abs(result.times[-1] - 0.0104) <= 0.5e-3

    def test_single_step_helper(self, moving_gaussian):
        """Test que step_split_operator equivale a un paso de evolve."""
        potential = SmoothBounded(amplitude=1.0, width=1.0)
        config = PropagatorConfig(scheme="SplitOperator", dt=0.01)
        one_step = step_split_operator(moving_gaussian, potential, 0.01)
        assert l2_distance(one_step, evolve(moving_gaussian, potential, 0.01, config).final) < 1e-14

    def test_long_run_norm_drift(self, gaussian_state):
        """Test que 10^4 pasos de Strang conservan la norma a 1e-10."""
        stepper = SplitOperatorStepper(
            gaussian_state.grid,
            eval_potential_grid(SmoothBounded(amplitude=1.0, width=1.0), gaussian_state.grid),
            1e-3,
            1.0,
        )
        assert abs(l2_norm(stepper.advance(gaussian_state, 10_000)) - 1.0) < 1e-10


@pytest.mark.unit
class TestCrankNicolson:
    """Tests del esquema Crank-Nicolson."""

    def test_close_to_exact_free_evolution(self):
        """Test contra la evolución libre exacta con dx = 0.05."""
        grid = make_grid(-25.6, 25.6, 1024)
        f = build_state(Gaussian(x0=0.0, p0=0.0, sigma=1.0), grid)
        config = PropagatorConfig(scheme="CrankNicolson", dt=0.01)

        result = evolve(f, FreePotential(), 1.0, config)

        assert l2_norm(result.final) == pytest.approx(1.0, abs=1e-10)
        assert l2_distance(result.final, evolve_free_exact(f, 1.0)) < 5e-3

    def test_matches_exact_free_at_small_step(self):
        """Test contra la evolución libre exacta con dt = 1e-3 y dx = 0.05."""
        grid = make_grid(-25.6, 25.6, 1024)
        f = build_state(Gaussian(x0=0.0, p0=0.0, sigma=1.0), grid)
        config = PropagatorConfig(scheme="CrankNicolson", dt=1e-3)

        result = evolve(f, FreePotential(), 1.0, config)

        assert l2_distance(result.final, evolve_free_exact(f, 1.0)) < 1e-3

    def test_long_run_norm_drift(self, gaussian_state):
        """Test que 10^4 pasos de Crank-Nicolson conservan la norma a 1e-7."""
        grid = gaussian_state.grid
        potential = eval_potential_grid(SmoothBounded(amplitude=1.0, width=1.0), grid)
        stepper = CrankNicolsonStepper(grid, potential, 1e-3, 1.0)
        assert abs(l2_norm(stepper.advance(gaussian_state, 10_000)) - 1.0) < 1e-7

    def test_agrees_with_split_operator(self, fine_grid):
        """Test que Crank-Nicolson y split-operator coinciden en un potencial suave."""
        f = build_state(Gaussian(x0=-3.0, p0=1.0, sigma=1.0), fine_grid)
        potential = SmoothBounded(amplitude=1.0, width=1.0)

        finals = [
            evolve(f, potential, 1.0, PropagatorConfig(scheme=scheme, dt=1e-3)).final
            for scheme in ("SplitOperator", "CrankNicolson")
        ]

        assert l2_distance(finals[0], finals[1]) < 1e-3

    def test_box_eigenstate_gains_only_a_phase(self):
        """Test que un modo sinusoidal de la caja de Dirichlet solo adquiere una fase."""
        grid = make_grid(-5.0, 5.0, 256)
        n, mode, dt = grid.n_points, 3, 0.01
        raw = WaveFunction(grid, np.sin(np.pi * mode * np.arange(n) / n))
        f = raw.scaled(1.0 / l2_norm(raw))

        stepped = step_crank_nicolson(f, FreePotential(), dt, boundary="Dirichlet")

        level = (1.0 - np.cos(np.pi * mode / n)) / grid.dx ** 2
        phase = np.exp(-2j * np.arctan(0.5 * level * dt))
        assert inner_product(f, stepped) == pytest.approx(phase, abs=1e-10)
        assert l2_distance(stepped, f.scaled(phase)) < 1e-10

    def test_dirichlet_trap_confines_exactly(self):
        """Test que con paredes de Dirichlet no sale masa de la región III."""
        grid = make_grid(-12.8, 12.8, 512)
        trap = DoubleWallTrap(a1=-3.0, a2=-2.0, a3=2.0, a4=3.0)
        f = build_state(Bump(center=0.0, radius=1.5), grid)
        config = PropagatorConfig(scheme="CrankNicolson", dt=1e-3, boundary="Dirichlet")

        result = evolve(f, trap, 0.5, config, [0.1, 0.25])

        x = grid.x_values
        for state in result.states:
            assert np.all(state.samples[(x <= -2.0) | (x >= 2.0)] == 0.0)
            assert interval_mass(state, -2.0, 2.0) == pytest.approx(1.0, abs=1e-10)
        assert result.warnings == []

    def test_single_step_helper(self, moving_gaussian):
        """Test que step_crank_nicolson conserva la norma."""
        stepped = step_crank_nicolson(moving_gaussian, SmoothBounded(amplitude=1.0, width=1.0), 0.01)
        assert l2_norm(stepped) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.unit
class TestPropagatorConfig:
    """Tests de configuración, selección de esquema y relleno."""

    @pytest.mark.edge_case
    def test_dirichlet_requires_crank_nicolson(self):
        """Test que solo Crank-Nicolson admite frontera de Dirichlet."""
        with pytest.raises(ValidationError):
            PropagatorConfig(scheme="SplitOperator", boundary="Dirichlet")

    @pytest.mark.edge_case
    @pytest.mark.parametrize("field", [{"dt": 0.0}, {"m": -1.0}, {"scheme": "RungeKutta"}])
    def test_invalid_config(self, field):
        """Test de parámetros de propagación inválidos."""
        with pytest.raises(ValidationError):
            PropagatorConfig(**field)

    def test_exact_free_falls_back_with_potential(self):
        """Test que ExactFree con potencial pasa a split-operator."""
        barrier = RectangularBarrier(a=0.0, b=1.0, v0=1.0)
        assert resolve_scheme(PropagatorConfig(), barrier).scheme == "SplitOperator"
        assert resolve_scheme(PropagatorConfig(), FreePotential()).scheme == "ExactFree"

    def test_padding_warning(self, standard_grid):
        """Test que un paquete rápido en una caja pequeña genera advertencia."""
        fast = build_state(Gaussian(x0=0.0, p0=10.0, sigma=1.0), standard_grid)
        assert check_padding(standard_grid, fast, 5.0) is not None

        result = evolve(fast, FreePotential(), 5.0, PropagatorConfig())
        assert len(result.warnings) == 1
        assert "padding" in result.warnings[0]

    def test_padding_ok_for_slow_packet(self, gaussian_state, standard_grid):
        """Test que un paquete lento no genera advertencia."""
        assert check_padding(standard_grid, gaussian_state, 2.0) is None

    @pytest.mark.edge_case
    def test_sample_time_beyond_final_time(self, gaussian_state):
        """Test que un tiempo de muestreo fuera de [0, T] es un error."""
        with pytest.raises(ConfigurationException):
            evolve(gaussian_state, FreePotential(), 1.0, PropagatorConfig(), [2.0])
