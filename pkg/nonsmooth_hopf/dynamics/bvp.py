"""
Boundary value problems for systems with transverse variables.

A periodic orbit through the section phi = 0 satisfies U(u0, r0) = u0 and
R(u0, r0) = r0, where (U, R) is the one-turn map of the angle-parametrized
equations. When the transverse monodromy e^{2 pi A/omega} has no eigenvalue
1, u0 is eliminated first and the radial problem reduces to the planar one.
A one-dimensional kernel keeps u0 as an unknown and yields zero or two
orbits per parameter value.
"""

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import expm, null_space
from scipy.optimize import newton, root

from ..coeffs.ledger3d import gamma03_centre, gamma_hash, gamma_hash_effective
from ..coeffs.planar import sigma_tilde
from ..core.polar import TWO_PI
from ..core.types import System3D, SystemND
from ..utils.config import Config, get_config
from ..utils.decorators import handle_errors, log_execution
from ..utils.exceptions import (
    AngularSpeedError,
    DegenerateCoefficientError,
    DynamicsError,
    KernelDimensionError,
    ModelError,
    NoConvergenceError,
    RadiusEscapedError,
)
from ..utils.logging import get_logger
from .orbits import (
    Branch,
    BranchKind,
    Orbit,
    _branch_kind,
    _default_bracket,
    fit_slope,
    locate_root,
    make_orbit,
    predicted_radius,
)
from .poincare import poincare3

TransverseSystem = Union[System3D, SystemND]

# residual returned to hybr when a trial state leaves the neighbourhood
ESCAPED = 1e6


@dataclass
class MonodromyResult:
    """
    Linearization of the transverse return map at (u0, r0).

    ``matrix`` is dU/du, ``residual`` stacks U - u0 and R - r0 and
    ``kernel_dim`` counts the near-unit eigen-directions of ``matrix``.
    """

    matrix: np.ndarray
    residual: np.ndarray
    kernel_dim: int

    @property
    def residual_norm(self) -> float:
        return float(np.linalg.norm(self.residual))


def kernel_dimension(matrix: np.ndarray, tol: float = 1e-6) -> int:
    """Number of singular values of matrix - I below tol * max(1, |matrix|)."""
    m = np.atleast_2d(matrix)
    singular = np.linalg.svd(m - np.eye(m.shape[0]), compute_uv=False)
    return int(np.sum(singular < tol * max(1.0, np.linalg.norm(m, 2))))


def linear_monodromy(system: TransverseSystem) -> np.ndarray:
    """e^{2 pi A / omega} of the transverse block at r = 0."""
    a = np.array([[system.c1]]) if isinstance(system, System3D) else np.asarray(system.transverse)
    return expm(2.0 * math.pi * a / system.omega)


def _as_3d(nd: SystemND) -> System3D:
    """Collapse a SystemND with one transverse variable to a System3D."""
    if nd.dim != 1:
        raise ModelError("Only systems with one transverse variable collapse to 3D", details={"dim": nd.dim})
    (h11, h12), (h21, h22) = nd.h[0]
    return System3D(
        planar=nd.planar,
        c1=nd.transverse[0, 0], c2=nd.uu[0, 0, 0], c3=nd.uv[0, 0], c4=nd.uw[0, 0], c5=nd.vw[0],
        c6=nd.c6[0], c7=nd.c7[0], c8=nd.c8[0], c9=nd.c9[0],
        h11=h11, h12=h12, h21=h21, h22=h22, h_slopes=nd.h_slopes[0],
    )


def _turn(system: TransverseSystem, u: np.ndarray, r: float, config: Config) -> Tuple[np.ndarray, float]:
    """(U, R) as arrays regardless of the transverse dimension."""
    start = float(u[0]) if isinstance(system, System3D) else u
    u_end, r_end = poincare3(system, start, r, config.integrator)
    return np.atleast_1d(np.asarray(u_end, dtype=float)), r_end


def monodromy_nd(
    system: TransverseSystem,
    mu: Optional[float],
    u0: Union[float, Sequence[float]],
    r0: float,
    config: Optional[Config] = None,
) -> MonodromyResult:
    """
    Central-difference dU/du at (u0, r0) together with the fixed-point residual.

    Raises KernelDimensionError when more than one direction is neutral.
    """
    config = config or get_config()
    if mu is not None:
        system = system.with_mu(mu)
    u0 = np.atleast_1d(np.asarray(u0, dtype=float))
    k = u0.size
    h = max(config.orbit.floquet_min_step, config.orbit.floquet_rel_step * max(float(np.max(np.abs(u0))), r0 * r0))
    matrix = np.empty((k, k))
    for j in range(k):
        step = np.zeros(k)
        step[j] = h
        plus, _ = _turn(system, u0 + step, r0, config)
        minus, _ = _turn(system, u0 - step, r0, config)
        matrix[:, j] = (plus - minus) / (2.0 * h)
    u_end, r_end = _turn(system, u0, r0, config)
    result = MonodromyResult(
        matrix=matrix,
        residual=np.concatenate([u_end - u0, [r_end - r0]]),
        kernel_dim=kernel_dimension(matrix),
    )
    if result.kernel_dim > 1:
        raise KernelDimensionError(
            "Transverse monodromy has more than one neutral direction",
            details={"kernel_dim": result.kernel_dim, "eigenvalues": np.linalg.eigvals(matrix).tolist()},
        )
    return result


@handle_errors(NoConvergenceError, "Elimination of the transverse variable failed")
def _eliminate(system: TransverseSystem, r: float, config: Config, guess: Optional[np.ndarray] = None) -> np.ndarray:
    """u0(r) with U(u0, r) = u0 for a hyperbolic transverse block."""
    if isinstance(system, System3D):
        x0 = 0.0 if guess is None else float(guess[0])
        try:
            u = newton(
                lambda u: _turn(system, np.array([u]), r, config)[0][0] - u,
                x0, tol=config.orbit.newton_tol * r * r, maxiter=config.orbit.newton_max_iter,
            )
        except RuntimeError as e:
            raise NoConvergenceError(f"Secant iteration for u0 stalled at r={r:.3g}", details={"r": r}) from e
        return np.array([float(u)])
    x0 = np.zeros(system.dim) if guess is None else guess
    scale = r * r
    sol = root(lambda u: (_turn(system, u, r, config)[0] - u) / scale, x0, method="hybr",
               options={"xtol": config.orbit.newton_tol})
    if not sol.success:
        raise NoConvergenceError(f"Transverse elimination failed at r={r:.3g}: {sol.message}", details={"r": r})
    return sol.x


def _reduced_map(system: TransverseSystem, config: Config) -> Callable[[float], float]:
    """r -> R(u0(r), r) on the graph of the eliminated transverse variable."""

    def reduced(r: float) -> float:
        return _turn(system, _eliminate(system, r, config), r, config)[1]

    return reduced


def _solve_hyperbolic(system: TransverseSystem, config: Config) -> List[Orbit]:
    reduced = _reduced_map(system, config)

    def defect(r: float) -> float:
        try:
            return (reduced(r) - r) / r
        except RadiusEscapedError:
            return 1.0

    r0 = locate_root(defect, _default_bracket(system, config), config)
    if r0 is None:
        return []
    u0 = _eliminate(system, r0, config)
    orbit = make_orbit(system, r0, config, transverse=u0, return_map=reduced)
    get_logger().debug(f"Orbit at mu={orbit.mu:.6g}: r0={orbit.r0:.10g}, |u0|={np.max(np.abs(u0)):.3e}")
    return [orbit]


def _two_equation_solve(
    system: TransverseSystem,
    guesses: Sequence[Tuple[np.ndarray, float]],
    r_scale: float,
    config: Config,
) -> List[Orbit]:
    """Solve U = u, R = r from each guess and keep the distinct positive-radius roots."""
    k = 1 if isinstance(system, System3D) else system.dim

    def residual(x: np.ndarray) -> np.ndarray:
        u, r = x[:k], x[k]
        if r <= 0.0:
            return np.full(k + 1, ESCAPED)
        try:
            u_end, r_end = _turn(system, u, r, config)
        except (RadiusEscapedError, AngularSpeedError):
            return np.full(k + 1, ESCAPED)
        return np.concatenate([(u_end - u) / r_scale ** 2, [(r_end - r) / r_scale]])

    found: List[np.ndarray] = []
    for u_guess, r_guess in guesses:
        sol = root(residual, np.concatenate([u_guess, [r_guess]]), method="hybr",
                   options={"xtol": config.orbit.newton_tol})
        x = sol.x
        if not sol.success or x[k] <= 0.0 or np.max(np.abs(residual(x))) > 1e-6:
            continue
        if any(np.allclose(x, y, rtol=1e-6, atol=1e-9 * r_scale) for y in found):
            continue
        found.append(x)

    orbits = []
    for x in sorted(found, key=lambda y: tuple(y[:k])):
        u0, r0 = x[:k], float(x[k])
        floquet = _map_floquet(system, u0, r0, config)
        orbits.append(make_orbit(system, r0, config, transverse=u0, floquet=floquet))
    return orbits


def _map_floquet(system: TransverseSystem, u0: np.ndarray, r0: float, config: Config) -> float:
    """Dominant forward-time multiplier of the full (u, r) return map."""
    x0 = np.concatenate([u0, [r0]])
    n = x0.size
    jac = np.empty((n, n))
    for j in range(n):
        h = max(config.orbit.floquet_min_step, config.orbit.floquet_rel_step * abs(x0[j]))
        step = np.zeros(n)
        step[j] = h
        up, rp = _turn(system, x0[:-1] + step[:-1], x0[-1] + step[-1], config)
        um, rm = _turn(system, x0[:-1] - step[:-1], x0[-1] - step[-1], config)
        jac[:, j] = (np.append(up, rp) - np.append(um, rm)) / (2.0 * h)
    moduli = np.abs(np.linalg.eigvals(jac))
    if system.planar.orientation < 0.0:
        # the phi-map of a clockwise flow runs backwards in time
        return float(1.0 / np.min(moduli))
    return float(np.max(moduli))


def centre_seeds(system: System3D, config: Optional[Config] = None) -> List[Tuple[np.ndarray, float]]:
    """
    Leading-order (u0, r0) of the two c1 = 0 orbits, or [] when
    omega c2 gamma_eff mu <= 0.

    r0 = -3 pi mu / (2 sigma_tilde) from the radial balance; u0 are the roots of
    (2 pi c2/omega) u^2 - (2 pi c4 mu/omega^2) r0 u - (pi mu/omega^2) gamma_eff r0^2,
    where gamma_eff carries the r0^3 forcing of the transverse return.
    """
    config = config or get_config()
    logger = get_logger()
    mu, omega, c2 = system.mu, system.omega, system.c2
    effective = gamma_hash_effective(system, gamma03_centre(system, config))
    if abs(effective) < config.tolerances.degeneracy * max(1.0, abs(gamma_hash(system))):
        raise DegenerateCoefficientError(
            "Centre-direction balance vanishes at leading order",
            details={"mu": mu, "gamma_hash": gamma_hash(system), "gamma_hash_eff": effective},
        )
    screen = omega * c2 * effective * mu
    if screen <= 0.0:
        logger.info(f"No real branch at mu={mu:.3g}: omega*c2*gamma_eff*mu = {screen:.3g}")
        return []
    r_guess = -3.0 * math.pi * mu / (2.0 * sigma_tilde(system.planar.quad))
    if r_guess <= 0.0:
        logger.info(f"No real branch at mu={mu:.3g}: planar balance gives r0 = {r_guess:.3g}")
        return []
    a = TWO_PI * c2 / omega
    b = -TWO_PI * system.c4 * mu * r_guess / omega ** 2
    c = -math.pi * mu * effective * r_guess ** 2 / omega ** 2
    root_disc = math.sqrt(b * b - 4.0 * a * c)
    return [(np.array([(-b + sign * root_disc) / (2.0 * a)]), r_guess) for sign in (1.0, -1.0)]


def _solve_centre(system: System3D, config: Config) -> List[Orbit]:
    """c1 = 0: zero or two orbits, seeded by the leading-order balance."""
    guesses = centre_seeds(system, config)
    if not guesses:
        return []
    return _two_equation_solve(system, guesses, guesses[0][1], config)


@log_execution()
def solve_3d_bvp(system: System3D, mu: Optional[float] = None, config: Optional[Config] = None) -> List[Orbit]:
    """
    Periodic orbits of a three-dimensional system at parameter ``mu``.

    With c1 != 0 the transverse variable is eliminated and at most one orbit
    returns; with c1 = 0 the two-equation problem yields zero or two.
    """
    config = config or get_config()
    if mu is not None:
        system = system.with_mu(mu)
    if system.omega == 0.0:
        raise ModelError("omega must be nonzero")
    if system.c1 != 0.0:
        return _solve_hyperbolic(system, config)
    return _solve_centre(system, config)


def _kernel_guesses(kernel: np.ndarray, r_guess: float) -> List[Tuple[np.ndarray, float]]:
    scales = np.geomspace(1e-3, 1.0, 7) * r_guess
    return [(sign * s * kernel, r_guess) for s in scales for sign in (1.0, -1.0)]


@log_execution()
def solve_nd_bvp(system: SystemND, mu: Optional[float] = None, config: Optional[Config] = None) -> List[Orbit]:
    """
    Periodic orbits of a system with k transverse variables.

    The kernel of e^{2 pi A/omega} - I selects the route: none eliminates u0,
    one keeps it as an unknown (embedded 3D solve when k = 1).
    """
    config = config or get_config()
    if mu is not None:
        system = system.with_mu(mu)
    if isinstance(system, System3D):
        return solve_3d_bvp(system, config=config)
    m0 = linear_monodromy(system)
    kdim = kernel_dimension(m0)
    logger = get_logger()
    logger.debug(f"Transverse monodromy kernel dimension {kdim} at mu={system.mu:.3g}")
    if kdim > 1:
        raise KernelDimensionError(
            "Transverse monodromy has more than one neutral direction",
            details={"kernel_dim": kdim},
        )
    if kdim == 0:
        orbits = _solve_hyperbolic(system, config)
    elif system.dim == 1:
        orbits = solve_3d_bvp(_as_3d(system), config=config)
    else:
        kernel = null_space(m0 - np.eye(system.dim), rcond=1e-6)[:, 0]
        r_guess = predicted_radius(system)
        orbits = [] if r_guess is None else _two_equation_solve(
            system, _kernel_guesses(kernel, r_guess), r_guess, config
        )
    for orbit in orbits:
        check = monodromy_nd(system, None, orbit.transverse, orbit.r0, config)
        logger.debug(f"Orbit r0={orbit.r0:.6g}: residual {check.residual_norm:.2e}, kernel {check.kernel_dim}")
    return orbits


@log_execution()
def continue_3d_branch(
    system: TransverseSystem,
    mu_grid: Sequence[float],
    config: Optional[Config] = None,
) -> Branch:
    """
    Orbits of a 3D or nD system along a mu grid.

    The kind is "two-branch-3d" as soon as one parameter value carries two
    orbits; otherwise it follows the planar rule.
    """
    config = config or get_config()
    grid = sorted(float(m) for m in mu_grid)
    if any(m == 0.0 for m in grid):
        raise ModelError("mu grid must exclude 0", details={"mu_grid": grid})
    solve = solve_3d_bvp if isinstance(system, System3D) else solve_nd_bvp
    logger = get_logger()
    branch = Branch()
    paired = False
    for mu in grid:
        try:
            orbits = solve(system, mu, config)
        except (DynamicsError, DegenerateCoefficientError) as e:
            logger.warning(f"Orbit location failed at mu={mu:.3g}: {e.message}")
            branch.failures.append({"mu": mu, "error": e.message})
            continue
        paired = paired or len(orbits) == 2
        branch.points.extend(orbits)

    if paired:
        branch.kind = BranchKind.TWO_BRANCH_3D
    else:
        branch.kind = _branch_kind(branch.points)
    if branch.points:
        branch.slope = fit_slope(branch.mus, branch.radii)
    logger.info(f"3D branch: {len(branch.points)} orbits, kind={branch.kind.value}")
    return branch
