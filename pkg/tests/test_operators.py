"""
Tests de observables y normas de localización.
"""

import numpy as np
import pytest
from scipy.special import erfc

from app.core.v1.exceptions import ConfigurationException
from app.core.v1.grid import inner_product, l2_norm
from app.core.v1.operators import (
    apply_abs_momentum,
    apply_hamiltonian,
    apply_momentum,
    apply_position_power,
    dn_norm,
    energy,
    growth_series,
    interval_mass,
    momentum_tail_mass,
    norm_report,
    s1_norm,
    s2_norm,
    sn_norm,
    supported_within,
    tail_mass,
)
from app.core.v1.potentials import FreePotential, SmoothBounded
from app.core.v1.states import Gaussian, TruncatedGaussian, build_state


@pytest.mark.unit
class TestObservables:
    """Tests de Q, P, |P| y H sobre gaussianas."""

    def test_position_power(self, gaussian_state):
        """Test que ||x f|| es sigma para una gaussiana centrada."""
        assert l2_norm(apply_position_power(gaussian_state, 1)) == pytest.approx(1.0, abs=1e-10)
        assert apply_position_power(gaussian_state, 0) is gaussian_state

    def test_momentum_expectation(self, moving_gaussian):
        """Test que <f, P f> es p0."""
        value = inner_product(moving_gaussian, apply_momentum(moving_gaussian))
        assert value.real == pytest.approx(1.5, abs=1e-10)
        assert abs(value.imag) < 1e-10

    def test_abs_momentum_norm(self, gaussian_state):
        """Test que || |P| f || = ||P f||."""
        assert l2_norm(apply_abs_momentum(gaussian_state)) == pytest.approx(
            l2_norm(apply_momentum(gaussian_state)), rel=1e-12
        )

    def test_free_energy(self, standard_grid):
        """Test de la energía cinética (p0^2 + 1/(4 sigma^2)) / 2."""
        f = build_state(Gaussian(x0=0.0, p0=1.0, sigma=1.0), standard_grid)
        assert energy(f, FreePotential()) == pytest.approx(0.625, abs=1e-10)
        assert energy(f, FreePotential(), m=2.0) == pytest.approx(0.3125, abs=1e-10)

    def test_hamiltonian_with_potential(self, gaussian_state):
        """Test que H = H0 + V suma el potencial punto a punto."""
        potential = SmoothBounded(amplitude=1.0, width=1.0)
        difference = apply_hamiltonian(gaussian_state, potential).samples - apply_hamiltonian(
            gaussian_state, FreePotential()
        ).samples
        x = gaussian_state.grid.x_values
        assert np.allclose(difference, np.exp(-0.5 * x ** 2) * gaussian_state.samples, atol=1e-14)

    @pytest.mark.edge_case
    def test_invalid_mass(self, gaussian_state):
        """Test que la masa debe ser positiva."""
        with pytest.raises(ConfigurationException):
            apply_hamiltonian(gaussian_state, FreePotential(), m=0.0)

    @pytest.mark.edge_case
    def test_negative_position_power(self, gaussian_state):
        """Test que la potencia de x debe ser un entero no negativo."""
        with pytest.raises(ConfigurationException):
            apply_position_power(gaussian_state, -1)


@pytest.mark.unit
class TestNorms:
    """Tests de las normas D_n y S_n."""

    def test_sn_norms_of_gaussian(self, gaussian_state):
        """Test de S_1 y S_2 con los momentos analíticos de la gaussiana."""
        assert s1_norm(gaussian_state) == pytest.approx(1.5, abs=1e-9)
        assert s2_norm(gaussian_state) == pytest.approx(np.sqrt(4.1875), abs=1e-9)

    def test_dn_norms_of_gaussian(self, gaussian_state):
        """Test de D_0 y D_1 para la gaussiana en reposo."""
        assert dn_norm(gaussian_state, 0, FreePotential()) == pytest.approx(1.0, abs=1e-12)
        assert dn_norm(gaussian_state, 1, FreePotential()) == pytest.approx(1.0, abs=1e-10)

    def test_dn_is_monotone_in_n(self, moving_gaussian):
        """Test que D_n crece con n."""
        potential = SmoothBounded(amplitude=1.0, width=1.0)
        values = [dn_norm(moving_gaussian, n, potential) for n in range(4)]
        assert all(later >= earlier for earlier, later in zip(values, values[1:]))

    @pytest.mark.edge_case
    def test_dn_above_n_max(self, gaussian_state):
        """Test que pedir D_n por encima de n_max es un error de configuración."""
        with pytest.raises(ConfigurationException):
            dn_norm(gaussian_state, 3, FreePotential(), n_max=2)

    @pytest.mark.edge_case
    def test_sn_requires_positive_order(self, gaussian_state):
        """Test que S_0 no está definido."""
        with pytest.raises(ConfigurationException):
            sn_norm(gaussian_state, 0)


@pytest.mark.unit
class TestMasses:
    """Tests de masas de cola e intervalos."""

    def test_gaussian_tail_mass(self, standard_grid, fine_grid):
        """Test de P(|x| > 2) = erfc(sqrt(2)) con los nodos de |x| = 2 a medio peso."""
        coarse = build_state(Gaussian(sigma=1.0), standard_grid)
        fine = build_state(Gaussian(sigma=1.0), fine_grid)

        assert tail_mass(coarse, 2.0) == pytest.approx(erfc(np.sqrt(2.0)), abs=2e-4)
        assert tail_mass(fine, 2.0) == pytest.approx(erfc(np.sqrt(2.0)), abs=1e-5)

    def test_interval_and_tail_masses_add_up(self, fine_grid):
        """Test que la masa interior y la cola suman la norma."""
        f = build_state(Gaussian(sigma=1.0), fine_grid)
        assert interval_mass(f, -1.0, 1.0) + tail_mass(f, 1.0) == pytest.approx(1.0, abs=1e-12)

    def test_support_edge_counts_half(self, standard_grid):
        """Test que una gaussiana truncada tiene soporte en |x| <= 2 pero medio peso en el borde."""
        f = build_state(TruncatedGaussian(x0=0.0, sigma=1.0, cutoff=2.0), standard_grid)
        edge = standard_grid.dx * np.sum(f.density[np.abs(standard_grid.x_values) == 2.0])

        assert supported_within(f, 2.0)
        assert not supported_within(f, 1.5)
        assert tail_mass(f, 2.0) == pytest.approx(0.5 * edge, rel=1e-12)

    def test_momentum_tail_mass(self, gaussian_state):
        """Test de la masa en momento más allá de un corte entre nodos (sigma_k = 1/2)."""
        cutoff = 10.5 * gaussian_state.grid.dk
        expected = erfc(cutoff / (0.5 * np.sqrt(2.0)))
        assert momentum_tail_mass(gaussian_state, cutoff) == pytest.approx(expected, abs=1e-3)

    @pytest.mark.edge_case
    @pytest.mark.parametrize("radius", [0.0, -1.0, 32.0, 40.0])
    def test_radius_outside_grid(self, gaussian_state, radius):
        """Test que el radio debe quedar dentro de la malla."""
        with pytest.raises(ConfigurationException):
            tail_mass(gaussian_state, radius)

    @pytest.mark.edge_case
    def test_momentum_cutoff_outside_band(self, gaussian_state):
        """Test que el corte en momento debe ser menor que k_max."""
        with pytest.raises(ConfigurationException):
            momentum_tail_mass(gaussian_state, gaussian_state.grid.k_max)

    @pytest.mark.edge_case
    def test_empty_interval(self, gaussian_state):
        """Test que un intervalo vacío es rechazado."""
        with pytest.raises(ConfigurationException):
            interval_mass(gaussian_state, 1.0, 1.0)


@pytest.mark.unit
class TestNormReport:
    """Tests del reporte de normas y las series de crecimiento."""

    def test_report_fields(self, gaussian_state):
        """Test de los campos del reporte."""
        report = norm_report(gaussian_state, 0.0, FreePotential(), radii=(1.0, 2.0), n_max=2)

        assert report.l2 == pytest.approx(1.0, abs=1e-12)
        assert sorted(report.d_norms) == [0, 1, 2]
        assert report.d_norms[1] == pytest.approx(dn_norm(gaussian_state, 1, FreePotential()))
        assert report.s3 is None
        assert set(report.tail_mass) == {1.0, 2.0}
        assert report.energy == pytest.approx(0.125, abs=1e-10)

    def test_growth_series(self, gaussian_state):
        """Test de la extracción de series por clave."""
        reports = [
            norm_report(gaussian_state, t, FreePotential(), n_max=2, track_s3=True) for t in (0.0, 1.0)
        ]
        assert [t for t, _ in growth_series(reports, "d2")] == [0.0, 1.0]
        assert growth_series(reports, "s3")[0][1] == pytest.approx(sn_norm(gaussian_state, 3))

    @pytest.mark.edge_case
    def test_untracked_series(self, gaussian_state):
        """Test que una norma no registrada es un error."""
        reports = [norm_report(gaussian_state, 0.0, FreePotential(), n_max=2)]
        with pytest.raises(ConfigurationException):
            growth_series(reports, "s3")
        with pytest.raises(ConfigurationException):
            growth_series(reports, "d5")
