"""
Time-domain cross-check of the shimmy verdict.

mu is not a parameter of the model, so c1 is retuned until the critical
pair sits at mu = +eps and mu = -eps. On each side the model is integrated
in its own coordinates with restarts on q = 0, and the once-around return of
xi1 on the half-plane {xi2 = 0, xi1 > 0} is scanned for a sign change of
D(a) = xi1(return) - a.
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
from scipy.optimize import brentq

from ..dynamics.events import switched_integrate
from ..utils.config import Config, get_config
from ..utils.exceptions import DynamicsError, NoConvergenceError, ShimmyError
from ..utils.logging import get_logger
from .analysis import ShimmyVerdict, analyze_shimmy
from .model import ShimmyParams, eigensplit

MAX_BRACKET_EXPANSIONS = 40


def tune_c1(p: ShimmyParams, target_mu: float, step: float = 1e-2) -> ShimmyParams:
    """Move c1 until the real part of the complex pair equals ``target_mu``."""

    def offset(c1: float) -> float:
        return eigensplit(p.with_c1(c1)).mu - target_mu

    lo = hi = p.c1
    f_lo = f_hi = offset(p.c1)
    if f_lo == 0.0:
        return p
    width = step * (1.0 + abs(p.c1))
    for _ in range(MAX_BRACKET_EXPANSIONS):
        lo, hi = p.c1 - width, p.c1 + width
        try:
            f_lo, f_hi = offset(lo), offset(hi)
        except ShimmyError:
            break
        if f_lo * f_hi <= 0.0:
            c1 = brentq(offset, lo, hi, xtol=1e-15, rtol=4.0 * np.finfo(float).eps)
            return p.with_c1(c1)
        width *= 2.0
    raise NoConvergenceError(
        "Could not bracket the target real part by moving c1",
        details={"target_mu": target_mu, "c1": p.c1, "bracket": [lo, hi]},
    )


@dataclass
class SideScan:
    """Return-map scan at one signed distance from criticality."""

    mu: float
    c1: float
    amplitudes: List[float] = field(default_factory=list)
    defects: List[float] = field(default_factory=list)
    orbits: List[float] = field(default_factory=list)

    @property
    def has_orbit(self) -> bool:
        return bool(self.orbits)

    def to_dict(self) -> Dict[str, Any]:
        return {"mu": self.mu, "c1": self.c1, "orbits": list(self.orbits)}


@dataclass
class SimulationResult:
    """Sides of mu on which orbits were found, and the verdict they imply."""

    eps: float
    plus: SideScan
    minus: SideScan

    @property
    def verdict(self) -> Optional[ShimmyVerdict]:
        if self.plus.has_orbit and not self.minus.has_orbit:
            return ShimmyVerdict.SUPERCRITICAL
        if self.minus.has_orbit and not self.plus.has_orbit:
            return ShimmyVerdict.SUBCRITICAL
        return None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "eps": self.eps,
            "verdict": None if self.verdict is None else self.verdict.value,
            "plus": self.plus.to_dict(),
            "minus": self.minus.to_dict(),
        }


def return_defect(p: ShimmyParams, amplitude: float, config: Optional[Config] = None) -> float:
    """D(a) for the orbit started at a * u."""
    config = config or get_config()
    eigen = eigensplit(p)
    t = eigen.transform
    t_inv = np.linalg.inv(t)
    section_row = t_inv[1]

    def fun(time: float, y: np.ndarray) -> np.ndarray:
        f = p.rhs(time, y)
        return np.append(f, section_row @ f)

    y0 = np.append(amplitude * eigen.u, 0.0)
    t_max = 10.0 * 2.0 * math.pi / eigen.omega
    result = switched_integrate(
        fun, y0, surfaces=(2, 3), t_max=t_max, stop_surface=3, stop_count=2, config=config.integrator,
    )
    if result.count(3) < 2:
        raise DynamicsError("Trajectory did not return to the section", details={"amplitude": amplitude})
    return float(t_inv[0] @ result.y_end[:3] - amplitude)


def scan_side(
    p: ShimmyParams,
    mu: float,
    r_scale: float,
    points: int = 24,
    config: Optional[Config] = None,
) -> SideScan:
    """Tune c1 to ``mu`` and look for sign changes of D on [0.2, 5] * r_scale."""
    config = config or get_config()
    tuned = tune_c1(p, mu)
    scan = SideScan(mu=mu, c1=tuned.c1)
    scan.amplitudes = list(np.geomspace(0.2 * r_scale, 5.0 * r_scale, points))

    def defect(a: float) -> float:
        try:
            return return_defect(tuned, a, config)
        except DynamicsError:
            return math.nan

    scan.defects = [defect(a) for a in scan.amplitudes]
    for a0, a1, d0, d1 in zip(scan.amplitudes, scan.amplitudes[1:], scan.defects, scan.defects[1:]):
        if not (math.isfinite(d0) and math.isfinite(d1)) or d0 * d1 > 0.0:
            continue
        scan.orbits.append(brentq(defect, a0, a1, xtol=1e-12 * r_scale) if d0 != d1 else a0)
    return scan


def simulate_verdict(p: ShimmyParams, eps: float = 1e-3, config: Optional[Config] = None) -> SimulationResult:
    """
    Decide criticality from simulation alone.

    Supercritical when orbits exist only for mu = +eps, subcritical when only
    for mu = -eps, undecided otherwise.
    """
    config = config or get_config()
    logger = get_logger()
    analysis = analyze_shimmy(p, config)
    if analysis.integral_chi2 == 0.0:
        raise ShimmyError("Averaged quadratic coefficient vanishes; no amplitude scale", details={"params": p.to_list()})
    r_scale = abs(2.0 * math.pi * eps / analysis.integral_chi2)

    plus = scan_side(p, eps, r_scale, config=config)
    minus = scan_side(p, -eps, r_scale, config=config)
    result = SimulationResult(eps=eps, plus=plus, minus=minus)
    logger.debug(
        f"Shimmy simulation: orbits at mu=+{eps:g}: {plus.orbits}, at mu=-{eps:g}: {minus.orbits}"
        f" -> {None if result.verdict is None else result.verdict.value}"
    )
    return result
