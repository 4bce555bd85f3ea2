"""
Artifact and error plumbing shared by the CLI commands.

Artifacts go to ``--output`` (``-`` or unset means standard output); errors
go to standard error as one JSON object and set the exit code of their
group.
"""

import functools
import json
import sys
from pathlib import Path
from typing import Any, Callable, List, Optional

import click
import numpy as np
import pandas as pd

from ..utils.config import Config
from ..utils.exceptions import InvalidConfigError, NonsmoothHopfError, exit_code_for
from ..utils.logging import get_logger


def _to_stdout(output: Optional[str]) -> bool:
    return output is None or str(output) == "-"


def _jsonable(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        return value.item()
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def dumps(payload: Any, config: Config) -> str:
    return json.dumps(payload, indent=config.output.json_indent, default=_jsonable)


def write_text(text: str, output: Optional[str]) -> None:
    if _to_stdout(output):
        click.echo(text, nl=not text.endswith("\n"))
        return
    path = Path(output)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text if text.endswith("\n") else text + "\n")
    get_logger().debug(f"Wrote {path}")


def emit_json(payload: Any, output: Optional[str], config: Config) -> None:
    write_text(dumps(payload, config), output)


def emit_frame(frame: pd.DataFrame, output: Optional[str], config: Config) -> None:
    text = frame.to_csv(index=False, float_format=config.output.csv_float_format, lineterminator="\n")
    write_text(text, output)


def sibling(output: Optional[str], suffix: str) -> Optional[str]:
    """Path next to ``output`` with its suffix replaced, or None for stdout."""
    if _to_stdout(output):
        return None
    path = Path(output)
    return str(path.with_name(path.stem + suffix))


def error_payload(error: NonsmoothHopfError) -> dict:
    return {
        "error": type(error).__name__,
        "message": error.message,
        "details": error.details,
        "exit_code": exit_code_for(error),
    }


def emit_error(error: NonsmoothHopfError) -> int:
    """Write the machine-readable error to stderr and return its exit code."""
    click.echo(json.dumps(error_payload(error), default=str), err=True)
    return exit_code_for(error)


def cli_errors(func: Callable) -> Callable:
    """Turn package errors raised by a command into error JSON and an exit code."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except NonsmoothHopfError as e:
            get_logger().debug(f"{func.__name__} failed: {e.message}")
            sys.exit(emit_error(e))

    return wrapper


def mu_grid(mu_min: float, mu_max: float, count: int) -> List[float]:
    """Evenly spaced parameter values with 0 removed."""
    if count < 2:
        raise InvalidConfigError("--mu-count must be at least 2", details={"mu_count": count})
    if not mu_min < mu_max:
        raise InvalidConfigError("--mu-min must lie below --mu-max", details={"mu_min": mu_min, "mu_max": mu_max})
    grid = [float(m) for m in np.linspace(mu_min, mu_max, count) if m != 0.0]
    if not grid:
        raise InvalidConfigError("mu grid is empty after removing 0")
    return grid


def apply_tolerances(config: Config, rtol: Optional[float], atol: Optional[float]) -> Config:
    if rtol is not None:
        config.integrator.rtol = rtol
    if atol is not None:
        config.integrator.atol = atol
    config.validate()
    return config
