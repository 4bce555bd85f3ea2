"""
Utility decorators for nonsmooth-hopf.

This module provides decorators for timing, error translation, input file
checks and floating-point warning control.
"""

import functools
import time
from pathlib import Path
from typing import Any, Callable, Optional, Type

import numpy as np

from .exceptions import NonsmoothHopfError
from .logging import get_logger


def log_execution(level: str = "DEBUG"):
    """
    Log function execution with timing.

    Args:
        level: Log level used for the completion message

    Example:
        @log_execution()
        def continue_branch(system, mu_grid):
            ...
    """

    def decorator(func: Callable) -> Callable:
        @functools.wraps(func)
        def wrapper(*args, **kwargs) -> Any:
            logger = get_logger()
            func_name = f"{func.__module__}.{func.__name__}"
            emit = getattr(logger, level.lower(), logger.debug)

            logger.debug(f"Executing {func_name}")
            start_time = time.perf_counter()

            try:
                result = func(*args, **kwargs)
                elapsed = time.perf_counter() - start_time
                emit(f"{func_name} completed in {elapsed:.3f}s")
                return result
            except Exception as e:
                elapsed = time.perf_counter() - start_time
                logger.debug(f"{func_name} failed after {elapsed:.3f}s: {e}")
                raise

        return wrapper

    return decorator


def validate_file_exists(param_name: str = "file_path"):
    """
    Validate that a file exists before executing function.

    Args:
        param_name: Name of the parameter containing the file path

    Example:
        @validate_file_exists("input_path")
        def run_coeffs(input_path: Path, ...):
            ...
    """

    def decorator(func: Callable) -> Callable:
        @functools.wraps(func)
        def wrapper(*args, **kwargs) -> Any:
            import inspect
            from .exceptions import DescriptorError, InvalidConfigError

            sig = inspect.signature(func)
            if param_name not in sig.parameters:
                raise InvalidConfigError(
                    f"Parameter '{param_name}' not found in function signature"
                )
            bound = sig.bind(*args, **kwargs)
            file_path = bound.arguments.get(param_name)

            if isinstance(file_path, (str, Path)) and str(file_path) != "-":
                path = Path(file_path)
                if not path.is_file():
                    raise DescriptorError(
                        f"Input file not found: {path}", details={"path": str(path)}
                    )

            return func(*args, **kwargs)

        return wrapper

    return decorator


def handle_errors(
    error_type: Type[NonsmoothHopfError] = NonsmoothHopfError,
    message: Optional[str] = None,
    log_traceback: bool = False,
):
    """
    Handle errors and convert them to package exceptions.

    Args:
        error_type: Package exception type to raise
        message: Custom error message
        log_traceback: Whether to log full traceback

    Example:
        @handle_errors(NoConvergenceError, "Root refinement failed")
        def refine(...):
            ...
    """

    def decorator(func: Callable) -> Callable:
        @functools.wraps(func)
        def wrapper(*args, **kwargs) -> Any:
            try:
                return func(*args, **kwargs)
            except NonsmoothHopfError:
                raise
            except (ArithmeticError, ValueError, np.linalg.LinAlgError) as e:
                error_msg = message or f"Error in {func.__name__}: {e}"
                logger = get_logger()
                if log_traceback:
                    logger.exception(e, error_msg)
                else:
                    logger.debug(error_msg)
                raise error_type(error_msg, details={"original_error": str(e)}) from e

        return wrapper

    return decorator


def suppress_float_warnings(func: Callable) -> Callable:
    """
    Run a numerical kernel with overflow and invalid-value warnings silenced.

    Results are still checked by the caller (``np.isfinite``).
    """

    @functools.wraps(func)
    def wrapper(*args, **kwargs) -> Any:
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            return func(*args, **kwargs)

    return wrapper
