"""Validation utilities for grids, windows and experiment parameters."""

import math
import numbers
from typing import Sequence, Tuple

from app.core.v1.exceptions import ConfigurationException, ShapeException


class GridValidator:
    """Validator for grid construction and grid compatibility."""

    @staticmethod
    def validate_n_points(n_points: int) -> int:
        """
        Validate the number of grid points.

        Args:
            n_points: Number of lattice points

        Returns:
            int: Validated number of points

        Raises:
            ConfigurationException: If n_points is not a power of two >= 16
        """
        if isinstance(n_points, bool) or not isinstance(n_points, numbers.Integral):
            raise ConfigurationException(f"n_points must be an integer, got {n_points!r}")

        n_points = int(n_points)
        if n_points < 16:
            raise ConfigurationException(f"n_points must be at least 16, got {n_points}")

        if n_points & (n_points - 1):
            raise ConfigurationException(f"n_points must be a power of two, got {n_points}")

        return n_points

    @staticmethod
    def validate_domain(x_min: float, x_max: float) -> Tuple[float, float]:
        """
        Validate the spatial domain.

        Raises:
            ConfigurationException: If the bounds are not finite or x_max <= x_min
        """
        if not (math.isfinite(x_min) and math.isfinite(x_max)):
            raise ConfigurationException("Grid bounds must be finite")

        if x_max <= x_min:
            raise ConfigurationException(
                f"x_max must exceed x_min, got x_min={x_min}, x_max={x_max}"
            )

        return float(x_min), float(x_max)

    @staticmethod
    def validate_same_grid(first, second) -> None:
        """
        Ensure two wave functions share a grid and a representation.

        Raises:
            ShapeException: If grids or representations differ
        """
        if type(first) is not type(second):
            raise ShapeException(
                f"Representation mismatch: {type(first).__name__} vs {type(second).__name__}"
            )

        if not first.grid.same_as(second.grid):
            raise ShapeException(f"Grid mismatch: {first.grid} vs {second.grid}")

    @staticmethod
    def validate_sample_count(grid, count: int) -> None:
        """
        Ensure a sample array has one entry per lattice point.

        Raises:
            ShapeException: If the count differs from grid.n_points
        """
        if count != grid.n_points:
            raise ShapeException(f"Expected {grid.n_points} samples, got {count}")


class WindowValidator:
    """Validator for radii and analysis windows."""

    @staticmethod
    def validate_radius(grid, radius: float) -> float:
        """
        Validate a tail radius against the grid half-widths.

        Raises:
            ConfigurationException: If the radius is not strictly inside the grid
        """
        limit = min(abs(grid.x_min), grid.x_max)
        if not (0.0 < radius < limit):
            raise ConfigurationException(
                f"Radius {radius} outside (0, {limit}) for grid [{grid.x_min}, {grid.x_max}]"
            )

        return float(radius)

    @staticmethod
    def validate_window(grid, window: Sequence[float], min_points: int = 10) -> Tuple[float, float]:
        """
        Validate a fit window [R_lo, R_hi] on the positive half-line.

        Raises:
            ConfigurationException: If the window is malformed, leaves the grid or is too narrow
        """
        if len(window) != 2:
            raise ConfigurationException(f"Window must have two bounds, got {list(window)}")

        lo, hi = float(window[0]), float(window[1])
        if not (0.0 < lo < hi):
            raise ConfigurationException(f"Window must satisfy 0 < R_lo < R_hi, got [{lo}, {hi}]")

        if hi > min(abs(grid.x_min), grid.x_max):
            raise ConfigurationException(
                f"Window [{lo}, {hi}] exceeds grid [{grid.x_min}, {grid.x_max}]"
            )

        if (hi - lo) / grid.dx < min_points:
            raise ConfigurationException(
                f"Window [{lo}, {hi}] spans fewer than {min_points} grid points"
            )

        return lo, hi


class ParameterValidator:
    """Validator for scalar physical parameters."""

    @staticmethod
    def validate_positive(name: str, value: float) -> float:
        """
        Validate that a parameter is finite and strictly positive.

        Raises:
            ConfigurationException: If the value is not positive
        """
        if not (math.isfinite(value) and value > 0.0):
            raise ConfigurationException(f"{name} must be positive and finite, got {value}")

        return float(value)

    @staticmethod
    def validate_non_negative_int(name: str, value: int) -> int:
        """Validate that a parameter is a non-negative integer."""
        if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < 0:
            raise ConfigurationException(f"{name} must be a non-negative integer, got {value!r}")

        return value
