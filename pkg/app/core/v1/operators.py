"""Observables Q, P, |P|, H and the localization norm functionals."""

from typing import Dict, Iterable, List, Optional

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, Field

from app.core.v1.exceptions import ConfigurationException
from app.core.v1.grid import (
    WaveFunction,
    apply_momentum_multiplier,
    inner_product,
    l2_norm,
    to_momentum,
)
from app.core.v1.potentials import eval_potential_grid
from app.core.v1.validators import ParameterValidator, WindowValidator
from app.settings.v1.numerics import SETTINGS


class NormReport(BaseModel):
    """Snapshot of every localization functional at one time."""

    t: float = Field(description="Time of the snapshot")
    l2: float = Field(ge=0.0)
    d_norms: Dict[int, float] = Field(description="D_n norm per order n, 0..n_max")
    s1: float = Field(ge=0.0)
    s2: float = Field(ge=0.0)
    s3: Optional[float] = Field(default=None, description="S_3 norm when requested")
    tail_mass: Dict[float, float] = Field(description="Probability beyond |x| = R per radius")
    energy: float = Field(description="<H>")


def apply_position_power(f: WaveFunction, k: int) -> WaveFunction:
    ParameterValidator.validate_non_negative_int("k", k)
    if k == 0:
        return f
    return f.with_samples(f.grid.x_values ** k * f.samples)


def apply_momentum(f: WaveFunction) -> WaveFunction:
    """P = -i d/dx as multiplication by k."""
    return apply_momentum_multiplier(f, f.grid.k_values)


def apply_abs_momentum(f: WaveFunction) -> WaveFunction:
    return apply_momentum_multiplier(f, np.abs(f.grid.k_values))


def _kinetic_multiplier(f: WaveFunction, m: float) -> NDArray[np.float64]:
    return f.grid.k_values ** 2 / (2.0 * m)


def _apply_h(f: WaveFunction, v_values: NDArray[np.float64], m: float) -> WaveFunction:
    kinetic = apply_momentum_multiplier(f, _kinetic_multiplier(f, m))
    return f.with_samples(kinetic.samples + v_values * f.samples)


def apply_hamiltonian(f: WaveFunction, V, m: Optional[float] = None) -> WaveFunction:
    """H f = -(1/2m) f'' + V f, kinetic part applied spectrally."""
    m = SETTINGS.DEFAULT_MASS if m is None else ParameterValidator.validate_positive("m", m)
    return _apply_h(f, eval_potential_grid(V, f.grid), m)


def _dn_terms(f: WaveFunction, n: int, V, m: float) -> Dict[tuple, float]:
    """||x^k H^j f|| for every k + j <= n."""
    v_values = eval_potential_grid(V, f.grid)
    terms = {(0, 0): l2_norm(f)}
    powered = f
    for j in range(n + 1):
        if j > 0:
            powered = _apply_h(powered, v_values, m)
        for k in range(n - j + 1):
            if (k, j) == (0, 0):
                continue
            terms[(k, j)] = l2_norm(apply_position_power(powered, k))
    return terms


def _check_order(n: int, n_max: Optional[int]) -> int:
    ParameterValidator.validate_non_negative_int("n", n)
    ceiling = SETTINGS.N_MAX if n_max is None else n_max
    if n > ceiling:
        raise ConfigurationException(f"D_n order {n} exceeds n_max={ceiling}")
    return n


def dn_norm(f: WaveFunction, n: int, V, m: Optional[float] = None, n_max: Optional[int] = None) -> float:
    """sup over k <= n, j <= n - k of ||x^k H^j f||."""
    _check_order(n, n_max)
    m = SETTINGS.DEFAULT_MASS if m is None else m
    return max(_dn_terms(f, n, V, m).values())


def sn_norm(f: WaveFunction, n: int) -> float:
    """(||f||^2 + || |x|^n f ||^2 + || |P|^n f ||^2)^(1/2)."""
    if n < 1:
        raise ConfigurationException(f"S_n requires n >= 1, got {n}")
    x_part = l2_norm(f.with_samples(np.abs(f.grid.x_values) ** n * f.samples))
    spectrum = to_momentum(f)
    p_part = l2_norm(spectrum.with_samples(np.abs(spectrum.k) ** n * spectrum.samples))
    return float(np.sqrt(l2_norm(f) ** 2 + x_part ** 2 + p_part ** 2))


def s1_norm(f: WaveFunction) -> float:
    return sn_norm(f, 1)


def s2_norm(f: WaveFunction) -> float:
    return sn_norm(f, 2)


def _region_weights(distance: NDArray[np.float64], dx: float) -> NDArray[np.float64]:
    """Trapezoid weights of a region given each point's signed distance inside it.

    Interior points weigh 1 and lattice points on the boundary weigh 1/2.
    """
    on_boundary = np.abs(distance) <= 1e-9 * dx
    return np.where(on_boundary, 0.5, (distance > 0.0).astype(np.float64))


def tail_mass(f: WaveFunction, R: float) -> float:
    """Probability carried by |x| > R.

    Lattice points with |x| = R count with half weight, so the sum is the trapezoid
    rule for the tail and tail_mass(f, R) + interval_mass(f, -R, R) is the full norm.
    """
    WindowValidator.validate_radius(f.grid, R)
    weights = _region_weights(np.abs(f.grid.x_values) - R, f.grid.dx)
    return float(f.grid.dx * np.sum(weights * f.density))


def supported_within(f: WaveFunction, R: float) -> bool:
    """True iff every sample with |x| > R vanishes."""
    WindowValidator.validate_radius(f.grid, R)
    return not np.any(f.samples[np.abs(f.grid.x_values) > R])


def interval_mass(f: WaveFunction, lo: float, hi: float) -> float:
    """Probability carried by lo < x < hi, endpoints on the lattice at half weight."""
    if not lo < hi:
        raise ConfigurationException(f"Interval requires lo < hi, got [{lo}, {hi}]")
    x = f.grid.x_values
    weights = _region_weights(np.minimum(x - lo, hi - x), f.grid.dx)
    return float(f.grid.dx * np.sum(weights * f.density))


def momentum_tail_mass(f: WaveFunction, K: float) -> float:
    """Momentum-space probability carried by |k| > K."""
    if not 0.0 <= K < f.grid.k_max:
        raise ConfigurationException(f"Cutoff {K} outside [0, {f.grid.k_max})")
    spectrum = to_momentum(f)
    outside = np.abs(spectrum.k) > K
    return float(f.grid.dk * np.sum(spectrum.density[outside]))


def energy(f: WaveFunction, V, m: Optional[float] = None) -> float:
    """<f, H f> (real part)."""
    return inner_product(f, apply_hamiltonian(f, V, m)).real


def norm_report(
    f: WaveFunction,
    t: float,
    V,
    m: Optional[float] = None,
    radii: Iterable[float] = (),
    n_max: Optional[int] = None,
    track_s3: bool = False,
) -> NormReport:
    """Evaluate every functional of a NormReport for one snapshot."""
    m = SETTINGS.DEFAULT_MASS if m is None else m
    n_max = SETTINGS.N_MAX if n_max is None else n_max
    ParameterValidator.validate_non_negative_int("n_max", n_max)

    terms = _dn_terms(f, n_max, V, m)
    d_norms: Dict[int, float] = {}
    for n in range(n_max + 1):
        d_norms[n] = max(value for (k, j), value in terms.items() if k + j <= n)

    tails: Dict[float, float] = {float(R): tail_mass(f, R) for R in radii}

    return NormReport(
        t=float(t),
        l2=terms[(0, 0)],
        d_norms=d_norms,
        s1=s1_norm(f),
        s2=s2_norm(f),
        s3=sn_norm(f, 3) if track_s3 else None,
        tail_mass=tails,
        energy=energy(f, V, m),
    )


def growth_series(reports: List[NormReport], key: str) -> List[tuple]:
    """(t, value) pairs for a named functional: l2, s1, s2, s3 or d<n>."""
    series = []
    for report in reports:
        if key.startswith("d") and key[1:].isdigit():
            value = report.d_norms.get(int(key[1:]))
        else:
            value = getattr(report, key)
        if value is None:
            raise ConfigurationException(f"Functional {key} not tracked at t={report.t}")
        series.append((report.t, value))
    return series
