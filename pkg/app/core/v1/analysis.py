"""Tail falloff classification and norm-growth fits."""

from typing import Dict, List, Literal, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, Field
from scipy.optimize import minimize_scalar
from scipy.signal import find_peaks

from app.core.v1.exceptions import ConfigurationException, DataException
from app.core.v1.grid import WaveFunction, to_momentum
from app.core.v1.log_manager import LogManager
from app.core.v1.operators import supported_within, tail_mass
from app.core.v1.validators import WindowValidator
from app.settings.v1.numerics import SETTINGS

logger = LogManager(__name__)

Regime = Literal["CompactSupport", "Exponential", "Polynomial", "Undetermined"]

MIN_FIT_SAMPLES = 4
MIN_ENVELOPE_PEAKS = 4
MIN_TRAILING_ZEROS = 3
ORDER_SEARCH = (0.5, 2.5)
MAX_RESOLVED_ORDER = 2.25


class FalloffClassification(BaseModel):
    """Regime decision for the tail of one snapshot."""

    regime: Regime
    order: Optional[float] = Field(default=None, gt=0.0)
    fit_window: Tuple[float, float]
    fit_residual: float = Field(ge=0.0)
    floor_fraction: float = Field(ge=0.0, le=1.0)
    residuals: Dict[str, float] = Field(default_factory=dict, description="RMS residual per model")
    envelope: bool = Field(default=False, description="Fit used the local maxima only")
    side: Literal["left", "right"] = "right"


class GrowthFit(BaseModel):
    """Power law norm ~ prefactor * (1 + t)^exponent."""

    exponent: float
    prefactor: float
    residual: float = Field(ge=0.0)
    t_window: Tuple[float, float]
    n_samples: int = Field(ge=2)


def _tail_profile(f: WaveFunction, lo: float, hi: float) -> Tuple[NDArray, NDArray, str]:
    """Radius and modulus on the side carrying more mass inside the window."""
    x = f.grid.x_values
    modulus = np.abs(f.samples)
    right = (x >= lo) & (x <= hi)
    left = (x <= -lo) & (x >= -hi)

    if np.sum(modulus[left] ** 2) > np.sum(modulus[right] ** 2):
        radius, amplitude = -x[left][::-1], modulus[left][::-1]
        return radius, amplitude, "left"
    return x[right], modulus[right], "right"


def _linear_rms(u: NDArray, y: NDArray) -> Tuple[float, float, float]:
    slope, intercept = np.polyfit(u, y, 1)
    residual = float(np.sqrt(np.mean((y - (slope * u + intercept)) ** 2)))
    return float(slope), float(intercept), residual


def _upper_envelope(radius: NDArray, amplitude: NDArray) -> Tuple[NDArray, NDArray, bool]:
    peaks, _ = find_peaks(amplitude)
    if peaks.size >= MIN_ENVELOPE_PEAKS:
        return radius[peaks], amplitude[peaks], True
    return radius, amplitude, False


def _refine_order(radius: NDArray, y: NDArray) -> float:
    scale = radius / radius[-1]

    def rms(q: float) -> float:
        return _linear_rms(scale ** q, y)[2]

    found = minimize_scalar(rms, bounds=ORDER_SEARCH, method="bounded", options={"xatol": 1e-4})
    return float(found.x)


def classify_falloff(
    f: WaveFunction,
    window: Sequence[float],
    floor: Optional[float] = None,
) -> FalloffClassification:
    """Classify tail decay inside [R_lo, R_hi].

    The floor is relative to max|f| over the grid. A trailing run of sub-floor samples
    means compact support; otherwise log|f| is fitted against log r (polynomial), r and
    r^2 (exponential) and the smallest RMS residual wins. Near ties are Undetermined.

    Args:
        f (WaveFunction): Snapshot to classify.
        window (Sequence[float]): Radii [R_lo, R_hi] on the heavier side.
        floor (Optional[float]): Relative amplitude floor; defaults to LOCLAB_FLOOR.

    Returns:
        FalloffClassification: Regime decision and fit diagnostics.

    Raises:
        ConfigurationException: If the window leaves the grid or spans < 10 points.
    """
    lo, hi = WindowValidator.validate_window(f.grid, window)
    floor = SETTINGS.LOCLAB_FLOOR if floor is None else floor
    peak = float(np.max(np.abs(f.samples)))
    threshold = floor * peak

    radius, amplitude, side = _tail_profile(f, lo, hi)
    below = amplitude < threshold if peak > 0.0 else np.ones(amplitude.shape, dtype=bool)
    floor_fraction = float(np.mean(below))
    base = {"fit_window": (lo, hi), "floor_fraction": floor_fraction, "side": side}

    above = np.flatnonzero(~below)
    trailing = amplitude.size - (above[-1] + 1) if above.size else amplitude.size
    if trailing >= MIN_TRAILING_ZEROS:
        return FalloffClassification(regime="CompactSupport", fit_residual=0.0, **base)

    r_fit, a_fit, envelope = _upper_envelope(radius[above], amplitude[above])
    base["envelope"] = envelope
    if r_fit.size < MIN_FIT_SAMPLES:
        return FalloffClassification(regime="Undetermined", fit_residual=0.0, **base)

    y = np.log(a_fit)
    models = {
        "polynomial": _linear_rms(np.log(r_fit), y),
        "exponential_1": _linear_rms(r_fit, y),
        "exponential_2": _linear_rms(r_fit ** 2, y),
    }
    residuals = {name: fit[2] for name, fit in models.items()}
    ranked = sorted(residuals, key=residuals.get)
    best, runner_up = ranked[0], ranked[1]
    best_residual = residuals[best]
    base["residuals"] = residuals

    gap = residuals[runner_up] - best_residual
    if gap <= SETTINGS.TIE_TOLERANCE * residuals[runner_up]:
        return FalloffClassification(regime="Undetermined", fit_residual=best_residual, **base)

    slope = models[best][0]
    if slope >= 0.0:
        return FalloffClassification(regime="Undetermined", fit_residual=best_residual, **base)

    if best == "polynomial":
        return FalloffClassification(
            regime="Polynomial", order=-slope, fit_residual=best_residual, **base
        )

    order = _refine_order(r_fit, y)
    if order > MAX_RESOLVED_ORDER:
        return FalloffClassification(regime="Undetermined", fit_residual=best_residual, **base)

    return FalloffClassification(
        regime="Exponential", order=order, fit_residual=best_residual, **base
    )


def fit_growth_exponent(
    series: Sequence[Tuple[float, float]],
    t_window: Optional[Sequence[float]] = None,
) -> GrowthFit:
    """Least-squares slope of log(norm) against log(1 + t).

    Args:
        series: (t, norm) pairs.
        t_window: Times kept for the fit, default [1, 50].

    Raises:
        DataException: For non-positive norms, fewer than 8 samples or less than a decade in t.
    """
    t_lo, t_hi = (1.0, 50.0) if t_window is None else (float(t_window[0]), float(t_window[1]))
    if t_lo < 1.0 or t_hi <= t_lo:
        raise DataException(f"Growth window must satisfy 1 <= t_lo < t_hi, got [{t_lo}, {t_hi}]")

    data = np.asarray(series, dtype=np.float64).reshape(-1, 2)
    tol = 1e-9 * t_hi
    kept = data[(data[:, 0] >= t_lo - tol) & (data[:, 0] <= t_hi + tol)]

    if kept.shape[0] < 8:
        raise DataException(f"Growth fit needs >= 8 samples in [{t_lo}, {t_hi}], got {kept.shape[0]}")
    if kept[:, 0].max() < 10.0 * kept[:, 0].min() * (1.0 - 1e-9):
        raise DataException("Growth fit samples must span at least one decade in t")
    if np.any(kept[:, 1] <= 0.0) or not np.all(np.isfinite(kept[:, 1])):
        raise DataException("Growth fit requires positive finite norm values")

    slope, intercept, residual = _linear_rms(np.log1p(kept[:, 0]), np.log(kept[:, 1]))
    return GrowthFit(
        exponent=slope,
        prefactor=float(np.exp(intercept)),
        residual=residual,
        t_window=(t_lo, t_hi),
        n_samples=int(kept.shape[0]),
    )


def detect_spreading(
    f0: WaveFunction,
    ft: WaveFunction,
    R_support: float,
    margin: float,
    floor: float,
) -> bool:
    """True iff ft carries more than floor probability beyond R_support + margin.

    Raises:
        ConfigurationException: If f0 is not supported inside |x| <= R_support.
    """
    if not supported_within(f0, R_support):
        raise ConfigurationException(
            f"Initial state is not compactly supported within R={R_support} "
            f"(tail {tail_mass(f0, R_support):.3g})"
        )
    return tail_mass(ft, R_support + margin) > floor


def decay_exponents(cutoffs: Sequence[float], masses: Sequence[float]) -> List[float]:
    """Local log-log slopes -d log M / d log K of a tail-mass profile."""
    k = np.asarray(cutoffs, dtype=np.float64)
    m = np.asarray(masses, dtype=np.float64)
    if k.size < 2 or k.size != m.size:
        raise DataException("Tail profile needs at least two matching cutoffs and masses")
    if np.any(m <= 0.0) or np.any(k <= 0.0):
        raise DataException("Tail profile requires positive cutoffs and masses")
    return [float(slope) for slope in -np.diff(np.log(m)) / np.diff(np.log(k))]


def is_super_polynomial(exponents: Sequence[float]) -> bool:
    """Strictly steepening local slopes: faster than any fixed power."""
    slopes = np.asarray(exponents, dtype=np.float64)
    return bool(slopes.size >= 2 and np.all(np.diff(slopes) > 0.0))


def momentum_falloff_order(f: WaveFunction, band: Sequence[float]) -> float:
    """Power-law order of |phi(k)| for k in band, fitted on the upper envelope."""
    lo, hi = float(band[0]), float(band[1])
    spectrum = to_momentum(f)
    k = spectrum.k
    selected = (k >= lo) & (k <= hi)
    radius, amplitude, _ = _upper_envelope(k[selected], np.abs(spectrum.samples[selected]))
    positive = amplitude > 0.0
    if np.count_nonzero(positive) < MIN_FIT_SAMPLES:
        raise DataException(f"Too few non-zero momentum samples in [{lo}, {hi}]")
    slope, _, _ = _linear_rms(np.log(radius[positive]), np.log(amplitude[positive]))
    return -slope
