"""
Periodic-orbit location and continuation.

Orbits are fixed points of the return map, located as roots of
D(r) = (P(r) - r) / r. D is only Lipschitz at r = 0, so roots are found by
bracketing (Brent) and never by Newton on D.
"""

import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import brentq, minimize_scalar

from ..coeffs.report import nonlinearity_vanishes
from ..core.polar import TWO_PI, polar_decompose
from ..core.types import PlanarSystem, System3D, SystemND
from ..utils.config import Config, get_config
from ..utils.decorators import handle_errors, log_execution
from ..utils.exceptions import (
    AngularSpeedError,
    DynamicsError,
    ModelError,
    NoConvergenceError,
    NonIsolatedOrbitsError,
)
from ..utils.logging import get_logger
from .integrator import AnySystem, integrate_phi
from .poincare import poincare, radial_defect


class Stability(str, Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    NEUTRAL = "neutral"


class BranchKind(str, Enum):
    SUPERCRITICAL = "supercritical"
    SUBCRITICAL = "subcritical"
    VERTICAL = "vertical"
    TWO_BRANCH_3D = "two-branch-3d"
    NONE = "none"


@dataclass
class Orbit:
    """
    A located periodic orbit.

    ``floquet`` is the slope of the forward-time return map at r0;
    ``transverse`` holds u0 on the section for 3D/nD systems.
    """

    mu: float
    r0: float
    period: float
    stability: Stability
    floquet: float
    transverse: Optional[Tuple[float, ...]] = None

    def to_row(self) -> Dict[str, object]:
        u0 = None
        if self.transverse is not None:
            u0 = self.transverse[0] if len(self.transverse) == 1 else " ".join(f"{x:.16e}" for x in self.transverse)
        return {
            "mu": self.mu,
            "r0": self.r0,
            "period": self.period,
            "floquet": self.floquet,
            "stability": self.stability.value,
            "u0": u0,
        }


CSV_COLUMNS = ["mu", "r0", "period", "floquet", "stability", "u0"]


@dataclass
class Branch:
    """Orbits of one family ordered by mu."""

    points: List[Orbit] = field(default_factory=list)
    kind: BranchKind = BranchKind.NONE
    slope: Optional[float] = None
    failures: List[Dict[str, object]] = field(default_factory=list)

    @property
    def mus(self) -> np.ndarray:
        return np.array([p.mu for p in self.points])

    @property
    def radii(self) -> np.ndarray:
        return np.array([p.r0 for p in self.points])

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([p.to_row() for p in self.points], columns=CSV_COLUMNS)


def classify_stability(floquet: float, tol: float = 1e-9) -> Stability:
    if abs(abs(floquet) - 1.0) <= tol:
        return Stability.NEUTRAL
    return Stability.STABLE if abs(floquet) < 1.0 else Stability.UNSTABLE


def _planar_block(system: AnySystem) -> PlanarSystem:
    return system if isinstance(system, PlanarSystem) else system.planar


def radially_linear(system: AnySystem) -> bool:
    """True when nothing but the linear part acts on the planar block: orbits exist only at mu = 0."""
    return nonlinearity_vanishes(system)


def predicted_radius(system: AnySystem) -> Optional[float]:
    """
    Leading-order orbit radius -(mu/omega)/Sigma from the averaged quadratic
    coefficient, or None when that coefficient vanishes or the sign of mu
    admits no orbit.
    """
    from ..coeffs import planar as pc
    from ..coeffs.general import sigma_general

    planar = _planar_block(system)
    if planar.is_normal_form:
        carrier = 2.0 * pc.sigma_tilde(planar.quad) / (3.0 * math.pi * planar.omega)
    else:
        shifted = planar.matrix - planar.mu * np.eye(2)
        carrier = sigma_general(shifted, planar.quad).closed_form
    if abs(carrier) < 1e-14:
        return None
    radius = -(planar.mu / planar.omega) / carrier
    return radius if radius > 0.0 else None


def speed_radius(system: AnySystem, samples: int = 720) -> float:
    """
    Largest r with |Omega1| r + |Omega2| r^2 <= min |W| at every sampled angle.

    Below it phi' = W + r Omega1 + r^2 Omega2 keeps the sign of W. Returns
    inf when the planar block has no angular nonlinearity.
    """
    polar = polar_decompose(_planar_block(system))
    phi = np.linspace(0.0, TWO_PI, samples, endpoint=False)
    w_min = float(np.min(np.abs(polar.W(phi))))
    o1 = float(np.max(np.abs(polar.Omega1(phi))))
    o2 = float(np.max(np.abs(polar.Omega2(phi))))
    if o1 == 0.0 and o2 == 0.0:
        return math.inf
    return 2.0 * w_min / (o1 + math.sqrt(o1 * o1 + 4.0 * o2 * w_min))


def radius_cap(system: AnySystem, config: Config) -> float:
    """Upper end of every radius bracket: inside r_max and clear of vanishing phi'."""
    cap = min(0.99 * config.integrator.r_max, config.orbit.speed_margin * speed_radius(system))
    return max(cap, 2.0 * config.orbit.bracket_lo)


def _default_bracket(system: AnySystem, config: Config) -> Tuple[float, float]:
    lo = config.orbit.bracket_lo
    cap = radius_cap(system, config)
    guess = predicted_radius(system)
    if guess is None:
        return lo, cap
    return lo, min(cap, max(config.orbit.bracket_factor * guess, 10.0 * lo))


def locate_root(
    defect: Callable[[float], float],
    bracket: Tuple[float, float],
    config: Config,
) -> Optional[float]:
    """
    Smallest root of ``defect`` in the bracket.

    Tries the bracket ends first, then a geometric sweep. Raises
    NonIsolatedOrbitsError when |defect| stays below the configured
    tolerance over the whole sweep.
    """
    lo, hi = bracket
    if not 0.0 < lo < hi:
        raise ModelError("Bracket must satisfy 0 < r_lo < r_hi", details={"bracket": [lo, hi]})
    tol = config.orbit.nonisolated_tol
    logger = get_logger()
    f_lo, f_hi = defect(lo), defect(hi)
    grid = [lo, hi]
    values = [f_lo, f_hi]
    if np.sign(f_lo) == np.sign(f_hi) or max(abs(f_lo), abs(f_hi)) < tol:
        grid = list(np.geomspace(lo, hi, config.orbit.sweep_points))
        values = [f_lo] + [defect(r) for r in grid[1:-1]] + [f_hi]
        logger.debug(f"Bracket sweep over {len(grid)} radii in [{lo:.3g}, {hi:.3g}]")
        if max(abs(v) for v in values) < tol:
            raise NonIsolatedOrbitsError(
                "Return map is the identity across the bracket (vertical branch)",
                details={"bracket": [lo, hi], "max_defect": max(abs(v) for v in values)},
            )
    for (a, fa), (b, fb) in zip(zip(grid[:-1], values[:-1]), zip(grid[1:], values[1:])):
        if fa == 0.0:
            return a
        if np.sign(fa) != np.sign(fb):
            return _brent(defect, a, b, config)
    return None


@handle_errors(NoConvergenceError, "Brent refinement of the orbit radius failed")
def _brent(defect: Callable[[float], float], a: float, b: float, config: Config) -> float:
    xtol = config.orbit.newton_tol * max(1.0, a)
    return brentq(defect, a, b, xtol=xtol, rtol=4.0 * np.finfo(float).eps, maxiter=200)


def floquet_slope(
    system: AnySystem,
    r0: float,
    config: Config,
    return_map: Optional[Callable[[float], float]] = None,
) -> float:
    """Central-difference slope of the forward-time return map at r0."""
    step = return_map or (lambda r: poincare(system, r, config.integrator))
    h = max(config.orbit.floquet_min_step, config.orbit.floquet_rel_step * r0)
    h = min(h, 0.5 * r0)
    slope = (step(r0 + h) - step(r0 - h)) / (2 * h)
    # the phi-map of a clockwise flow runs backwards in time
    if _planar_block(system).orientation < 0.0 and slope != 0.0:
        slope = 1.0 / slope
    return slope


def make_orbit(
    system: AnySystem,
    r0: float,
    config: Config,
    transverse=None,
    return_map: Optional[Callable[[float], float]] = None,
    floquet: Optional[float] = None,
) -> Orbit:
    period = integrate_phi(system, r0, u0=transverse, config=config.integrator).period
    slope = floquet if floquet is not None else floquet_slope(system, r0, config, return_map)
    return Orbit(
        mu=system.mu,
        r0=r0,
        period=period,
        stability=classify_stability(slope),
        floquet=slope,
        transverse=None if transverse is None else tuple(np.atleast_1d(transverse).astype(float)),
    )


def find_orbit(
    system: AnySystem,
    mu: Optional[float] = None,
    bracket: Optional[Tuple[float, float]] = None,
    config: Optional[Config] = None,
) -> Optional[Orbit]:
    """
    Locate the periodic orbit of a planar system at parameter ``mu``.

    Returns None when D has no sign change in the bracket.
    """
    config = config or get_config()
    if mu is not None:
        system = system.with_mu(mu)
    if isinstance(system, (System3D, SystemND)):
        raise ModelError("find_orbit handles planar systems; use solve_3d_bvp or solve_nd_bvp")
    bracket = bracket or _default_bracket(system, config)
    root = locate_root(lambda r: radial_defect(system, r, config.integrator), bracket, config)
    if root is None:
        get_logger().debug(f"No orbit at mu={system.mu:.3g} in bracket {bracket}")
        return None
    orbit = make_orbit(system, root, config)
    get_logger().debug(f"Orbit at mu={orbit.mu:.6g}: r0={orbit.r0:.10g} ({orbit.stability.value})")
    return orbit


def fit_slope(mus: Sequence[float], radii: Sequence[float]) -> Optional[float]:
    """dr0/dmu at 0 from r0 = a mu + b mu^2 fitted through the origin."""
    mus = np.asarray(mus, dtype=float)
    radii = np.asarray(radii, dtype=float)
    if mus.size == 0:
        return None
    if mus.size == 1:
        return float(radii[0] / mus[0])
    design = np.column_stack([mus, mus ** 2])
    coeffs, *_ = np.linalg.lstsq(design, radii, rcond=None)
    return float(coeffs[0])


def _branch_kind(points: List[Orbit]) -> BranchKind:
    if not points:
        return BranchKind.NONE
    nearest = min(points, key=lambda p: abs(p.mu))
    return BranchKind.SUPERCRITICAL if nearest.mu > 0.0 else BranchKind.SUBCRITICAL


@log_execution()
def continue_branch(
    system: AnySystem,
    mu_grid: Sequence[float],
    config: Optional[Config] = None,
    solver: Optional[Callable[[AnySystem, float, Optional[Tuple[float, float]]], Optional[Orbit]]] = None,
) -> Branch:
    """
    Warm-started orbit location along a mu grid that excludes zero.

    The kind follows from the sign of mu carrying the orbits nearest to the
    bifurcation; it is "vertical" when every grid point reports a
    non-isolated family.
    """
    config = config or get_config()
    grid = sorted(float(m) for m in mu_grid)
    if any(m == 0.0 for m in grid):
        raise ModelError("mu grid must exclude 0", details={"mu_grid": grid})
    solve = solver or (lambda sys, mu, br: find_orbit(sys, mu, br, config))
    logger = get_logger()
    branch = Branch()
    vertical = 0

    for side in (sorted((m for m in grid if m < 0), reverse=True), [m for m in grid if m > 0]):
        previous: Optional[Orbit] = None
        for mu in side:
            bracket = None
            if previous is not None:
                grow = max(1.0, abs(mu / previous.mu))
                hi = min(radius_cap(system, config), 4.0 * grow * previous.r0)
                bracket = (config.orbit.bracket_lo, hi)
            try:
                orbit = solve(system, mu, bracket)
                if orbit is None and bracket is not None:
                    orbit = solve(system, mu, None)
            except NonIsolatedOrbitsError as e:
                vertical += 1
                branch.failures.append({"mu": mu, "error": e.message})
                continue
            except (DynamicsError, AngularSpeedError) as e:
                logger.warning(f"Orbit location failed at mu={mu:.3g}: {e.message}")
                branch.failures.append({"mu": mu, "error": e.message})
                continue
            if orbit is not None:
                branch.points.append(orbit)
                previous = orbit

    branch.points.sort(key=lambda p: p.mu)
    if vertical == len(grid) or (not branch.points and radially_linear(system)):
        branch.kind = BranchKind.VERTICAL
    else:
        branch.kind = _branch_kind(branch.points)
        if branch.points:
            branch.slope = fit_slope(branch.mus, branch.radii)
    logger.info(f"Branch: {len(branch.points)} orbits, kind={branch.kind.value}, slope={branch.slope}")
    return branch


@dataclass
class AmplitudeBranch:
    """mu as a function of the orbit radius."""

    radii: np.ndarray
    mus: np.ndarray

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"r0": self.radii, "mu": self.mus})


@dataclass
class FoldPoint:
    r0: float
    mu: float

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


def mu_at_radius(
    system: PlanarSystem,
    r: float,
    mu_bracket: Tuple[float, float],
    config: Optional[Config] = None,
) -> Optional[float]:
    """Solve D(r; mu) = 0 for mu at fixed radius, or None without a sign change."""
    config = config or get_config()
    defect = lambda mu: radial_defect(system.with_mu(mu), r, config.integrator)  # noqa: E731
    a, b = mu_bracket
    fa, fb = defect(a), defect(b)
    if np.sign(fa) == np.sign(fb):
        return None
    return _brent(defect, a, b, config)


@log_execution()
def continue_in_amplitude(
    system: PlanarSystem,
    r_grid: Sequence[float],
    mu_bracket: Tuple[float, float],
    config: Optional[Config] = None,
) -> AmplitudeBranch:
    """mu(r) on a radius grid; radii without a root in the mu bracket are dropped."""
    config = config or get_config()
    radii, mus = [], []
    for r in r_grid:
        mu = mu_at_radius(system, float(r), mu_bracket, config)
        if mu is not None:
            radii.append(float(r))
            mus.append(mu)
    return AmplitudeBranch(np.array(radii), np.array(mus))


def detect_fold(
    system: PlanarSystem,
    r_grid: Sequence[float],
    mu_bracket: Tuple[float, float],
    config: Optional[Config] = None,
) -> Optional[FoldPoint]:
    """
    Interior extremum of mu(r), refined by bounded scalar minimisation.

    Returns None when mu(r) is monotone on the grid.
    """
    config = config or get_config()
    amp = continue_in_amplitude(system, r_grid, mu_bracket, config)
    if amp.mus.size < 3:
        return None
    diffs = np.diff(amp.mus)
    turns = np.nonzero(np.sign(diffs[:-1]) != np.sign(diffs[1:]))[0]
    if turns.size == 0:
        return None
    i = int(turns[0]) + 1
    sign = 1.0 if diffs[i - 1] < 0.0 else -1.0  # +1: minimum of mu(r)

    def objective(r: float) -> float:
        mu = mu_at_radius(system, r, mu_bracket, config)
        return math.inf if mu is None else sign * mu

    result = minimize_scalar(
        objective, bounds=(amp.radii[i - 1], amp.radii[i + 1]), method="bounded",
        options={"xatol": 1e-8 * amp.radii[i]},
    )
    fold = FoldPoint(r0=float(result.x), mu=float(sign * result.fun))
    get_logger().info(f"Fold at mu={fold.mu:.6g}, r0={fold.r0:.6g}")
    return fold
