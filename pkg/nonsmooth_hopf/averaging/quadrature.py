"""
Piecewise Gauss-Legendre quadrature over the circle.

Integrands are analytic between switching angles, so each panel between
consecutive kinks gets a fixed high-order rule; accuracy is checked by
comparing against the two-panel split and bisecting where they disagree.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np

from ..core.polar import TWO_PI, AngleFunction, normalize_angles
from ..utils.config import QuadratureConfig, get_config
from ..utils.exceptions import KinkListError, QuadratureAccuracyError
from ..utils.logging import get_logger

Integrand = Union[AngleFunction, Callable[[np.ndarray], np.ndarray]]


@lru_cache(maxsize=16)
def gauss_legendre(order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [-1, 1]."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


@dataclass(frozen=True)
class QuadratureResult:
    value: Union[float, np.ndarray]
    error: float
    panels: int


def panel_breaks(kinks: Sequence[float], a: float = 0.0, b: float = TWO_PI) -> np.ndarray:
    """Sorted breakpoints of [a, b]: the endpoints and every kink (mod 2pi) inside."""
    inside = []
    for k in normalize_angles(kinks):
        t = k + TWO_PI * math.ceil((a - k) / TWO_PI)
        while t < b:
            if t - a > 1e-13 and b - t > 1e-13:
                inside.append(t)
            t += TWO_PI
    return np.array(sorted({a, b, *inside}))


def _gl(f: Callable, a: float, b: float, order: int):
    x, w = gauss_legendre(order)
    half = 0.5 * (b - a)
    values = np.asarray(f(0.5 * (a + b) + half * x))
    return half * (values @ w)


def _adaptive(f: Callable, a: float, b: float, cfg: QuadratureConfig, tol: float, depth: int = 0):
    whole = _gl(f, a, b, cfg.order)
    m = 0.5 * (a + b)
    halves = _gl(f, a, m, cfg.order) + _gl(f, m, b, cfg.order)
    err = float(np.max(np.abs(halves - whole)))
    if err <= tol * max(1.0, float(np.max(np.abs(halves)))) or depth >= cfg.max_depth:
        return halves, err, 2
    left = _adaptive(f, a, m, cfg, 0.5 * tol, depth + 1)
    right = _adaptive(f, m, b, cfg, 0.5 * tol, depth + 1)
    return left[0] + right[0], left[1] + right[1], left[2] + right[2]


def _resolve_kinks(f: Integrand, kinks: Optional[Sequence[float]]) -> Tuple[float, ...]:
    if kinks is None:
        kinks = f.kinks if isinstance(f, AngleFunction) else ()
    if isinstance(f, AngleFunction) and not f.smooth and len(kinks) == 0:
        raise KinkListError(
            f"Kink list empty for non-smooth integrand '{f.name}'",
            details={"integrand": f.name},
        )
    return tuple(kinks)


def integrate(
    f: Integrand,
    kinks: Optional[Sequence[float]] = None,
    a: float = 0.0,
    b: float = TWO_PI,
    config: Optional[QuadratureConfig] = None,
    strict: bool = False,
) -> QuadratureResult:
    """
    Integrate ``f`` over [a, b] with panels split at ``kinks``.

    ``f`` may be vector-valued as long as the quadrature node axis is last.
    With ``strict`` a panel that fails to reach the tolerance at maximum
    depth raises QuadratureAccuracyError instead of logging a warning.
    """
    cfg = config or get_config().quadrature
    breaks = panel_breaks(_resolve_kinks(f, kinks), a, b)
    total, error, panels = 0.0, 0.0, 0
    span = max(b - a, 1e-300)
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        value, err, n = _adaptive(f, lo, hi, cfg, cfg.abs_tol * (hi - lo) / span)
        total = total + value
        error += err
        panels += n
    if error > 10.0 * cfg.abs_tol * max(1.0, float(np.max(np.abs(total)))) * len(breaks):
        message = f"Quadrature error estimate {error:.2e} above tolerance {cfg.abs_tol:.1e}"
        if strict:
            raise QuadratureAccuracyError(message, details={"error": error, "panels": panels})
        get_logger().warning(message)
    return QuadratureResult(value=total, error=error, panels=panels)


def piecewise_integral(
    f: Integrand,
    kinks: Optional[Sequence[float]] = None,
    a: float = 0.0,
    b: float = TWO_PI,
    config: Optional[QuadratureConfig] = None,
):
    """Integral of ``f`` over [a, b] (float, or array for vector-valued f)."""
    value = integrate(f, kinks, a, b, config).value
    return float(value) if np.ndim(value) == 0 else value


def piecewise_average(
    f: Integrand,
    kinks: Optional[Sequence[float]] = None,
    config: Optional[QuadratureConfig] = None,
):
    """Mean value (1/2pi) * integral over one period."""
    return piecewise_integral(f, kinks, 0.0, TWO_PI, config) / TWO_PI


def _nested_fixed(outer: Callable, inner: Callable, breaks: np.ndarray, order: int):
    """Nested rule on a fixed mesh; the inner integral restarts at every panel start."""
    x, w = gauss_legendre(order)
    total = 0.0
    carried = 0.0
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        half = 0.5 * (hi - lo)
        s = 0.5 * (lo + hi) + half * x
        # inner nodes on [lo, s_j]: tau_jk = lo + (s_j - lo)(x_k + 1)/2
        scale = 0.5 * (s - lo)
        tau = lo + scale[:, None] * (x[None, :] + 1.0)
        inner_vals = np.asarray(inner(tau.ravel()))
        inner_vals = inner_vals.reshape(inner_vals.shape[:-1] + tau.shape)
        cumulative = carried + (inner_vals @ w) * scale
        total = total + half * ((np.asarray(outer(s)) * cumulative) @ w)
        carried = carried + half * (np.asarray(inner(s)) @ w)
    return total


def nested_integral(
    outer: Integrand,
    inner: Integrand,
    kinks: Optional[Sequence[float]] = None,
    a: float = 0.0,
    b: float = TWO_PI,
    config: Optional[QuadratureConfig] = None,
):
    """
    Iterated integral of outer(s) * (integral of inner from a to s) over [a, b].

    The outer mesh splits at the union of both kink lists; the inner
    integral's upper limit runs over the outer nodes and is re-split at the
    same breakpoints. Panels are bisected uniformly until two successive
    refinements agree.
    """
    cfg = config or get_config().quadrature
    merged = list(_resolve_kinks(outer, kinks)) + list(_resolve_kinks(inner, kinks))
    breaks = panel_breaks(merged, a, b)
    previous = _nested_fixed(outer, inner, breaks, cfg.order)
    for level in range(1, cfg.max_depth + 1):
        mids = 0.5 * (breaks[:-1] + breaks[1:])
        breaks = np.sort(np.concatenate([breaks, mids]))
        current = _nested_fixed(outer, inner, breaks, cfg.order)
        err = float(np.max(np.abs(current - previous)))
        if err <= cfg.abs_tol * max(1.0, float(np.max(np.abs(current)))):
            get_logger().debug(f"Nested quadrature converged at level {level} (err={err:.2e})")
            return float(current) if np.ndim(current) == 0 else current
        previous = current
    get_logger().warning(f"Nested quadrature did not converge (err={err:.2e})")
    return float(previous) if np.ndim(previous) == 0 else previous
