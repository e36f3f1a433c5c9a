"""Decorators for run timing and numerical error translation."""

import time
import functools
from typing import Callable
from datetime import datetime

import numpy as np
import scipy.linalg

from app.core.v1.log_manager import LogManager
from app.core.v1.exceptions import NumericalException


def log_execution_time(func: Callable) -> Callable:
    """Decorator to log function execution time.

    Args:
        func (Callable): Function to decorate.

    Returns:
        Callable: Decorated function.
    """
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        logger = LogManager(func.__module__)
        start_time = time.perf_counter()

        try:
            result = func(*args, **kwargs)
            execution_time = time.perf_counter() - start_time

            logger.debug(
                f"Function {func.__name__} executed successfully",
                execution_time=f"{execution_time:.3f}s",
                timestamp=datetime.now().isoformat()
            )

            return result

        except Exception as err:
            execution_time = time.perf_counter() - start_time

            logger.error(
                f"Function {func.__name__} failed",
                execution_time=f"{execution_time:.3f}s",
                error=str(err),
                timestamp=datetime.now().isoformat()
            )
            raise

    return wrapper


def _has_non_finite(value) -> bool:
    samples = getattr(value, "samples", value)
    if isinstance(samples, np.ndarray) and np.issubdtype(samples.dtype, np.number):
        return not bool(np.all(np.isfinite(samples)))
    if isinstance(samples, (float, complex)):
        return not np.isfinite(samples)
    return False


def numerical_guard(func: Callable) -> Callable:
    """Decorator translating floating point failures into NumericalException.

    Floating point errors and linear algebra breakdowns raised inside the
    function, as well as non-finite results, are reported as numerical errors.

    Args:
        func (Callable): Function to decorate.

    Returns:
        Callable: Decorated function.
    """
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        logger = LogManager(func.__module__)

        try:
            with np.errstate(over="raise", invalid="raise"):
                result = func(*args, **kwargs)
        except (FloatingPointError, np.linalg.LinAlgError, scipy.linalg.LinAlgError, RuntimeError) as err:
            logger.error(
                f"Numerical failure in {func.__name__}",
                error=str(err)
            )
            raise NumericalException(
                f"Numerical failure in {func.__name__}: {err}"
            ) from err

        if _has_non_finite(result):
            logger.error(f"Non-finite result from {func.__name__}")
            raise NumericalException(
                f"Non-finite values produced by {func.__name__}"
            )

        return result

    return wrapper
