"""
Time-domain integration across coordinate switching surfaces.

Each segment runs solve_ivp with terminal events on the surfaces
y_i = 0 and restarts exactly on the crossing, so no step straddles a kink.
Event directions alternate per surface: a surface that was just crossed
downwards can only be crossed upwards next.
"""

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from ..core.rhs import eval_planar_rhs
from ..core.types import PlanarSystem
from ..utils.config import IntegratorConfig, get_config
from ..utils.exceptions import IntegrationError, RadiusEscapedError
from ..utils.logging import get_logger

Rhs = Callable[[float, np.ndarray], np.ndarray]


@dataclass
class SwitchedResult:
    """Concatenated samples of a switched integration with its crossing log."""

    t: np.ndarray
    y: np.ndarray
    crossings: List[Tuple[float, int]] = field(default_factory=list)
    stats: Dict[str, Any] = field(default_factory=dict)

    @property
    def t_end(self) -> float:
        return float(self.t[-1])

    @property
    def y_end(self) -> np.ndarray:
        return self.y[:, -1].copy()

    def count(self, surface: int) -> int:
        return sum(1 for _, i in self.crossings if i == surface)


def _surface_event(index: int, direction: float) -> Callable[[float, np.ndarray], float]:
    def event(t: float, y: np.ndarray) -> float:
        return y[index]

    event.terminal = True
    event.direction = direction
    return event


def _initial_direction(value: float, rate: float) -> float:
    # a state on the surface leaves along its rate; zero rate counts as leaving upwards
    if value != 0.0:
        return -math.copysign(1.0, value)
    return -math.copysign(1.0, rate) if rate != 0.0 else -1.0


def switched_integrate(
    fun: Rhs,
    y0: Sequence[float],
    surfaces: Sequence[int],
    t_max: float,
    stop_surface: Optional[int] = None,
    stop_count: int = 1,
    config: Optional[IntegratorConfig] = None,
) -> SwitchedResult:
    """
    Integrate ``fun`` from t = 0 with restarts on every coordinate surface.

    Stops at ``t_max`` or at the ``stop_count``-th crossing of
    ``stop_surface``. Raises IntegrationError on solver failure or when
    crossings of one surface accumulate (chattering).
    """
    cfg = config or get_config().integrator
    logger = get_logger()
    y = np.asarray(y0, dtype=float).copy()
    rate = np.asarray(fun(0.0, y), dtype=float)
    directions = {i: _initial_direction(y[i], rate[i]) for i in surfaces}

    t = 0.0
    ts: List[np.ndarray] = [np.array([0.0])]
    ys: List[np.ndarray] = [y[:, None]]
    crossings: List[Tuple[float, int]] = []
    nfev = segments = 0

    while t < t_max:
        if segments > cfg.max_steps:
            raise IntegrationError("Too many switching restarts", details={"t": t, "segments": segments})
        events = [_surface_event(i, directions[i]) for i in surfaces]
        sol = solve_ivp(fun, (t, t_max), y, method="DOP853", rtol=cfg.rtol, atol=cfg.atol, events=events)
        segments += 1
        nfev += sol.nfev
        if sol.status < 0:
            raise IntegrationError(f"Time integration failed: {sol.message}", details={"t": t})
        ts.append(sol.t[1:])
        ys.append(sol.y[:, 1:])
        if not np.all(np.isfinite(sol.y[:, -1])) or np.linalg.norm(sol.y[:, -1]) > 1e6:
            raise RadiusEscapedError("Time-domain trajectory diverged", details={"t": float(sol.t[-1])})
        if sol.status == 0:
            t = t_max
            break

        hit = next(k for k, te in enumerate(sol.t_events) if te.size)
        surface = surfaces[hit]
        t_cross = float(sol.t_events[hit][0])
        y = sol.y_events[hit][0].copy()
        y[surface] = 0.0
        # solve_ivp ends a terminated segment on the event time
        ys[-1][:, -1] = y

        previous = [tc for tc, i in crossings if i == surface]
        if previous and t_cross - previous[-1] < 1e-12 * max(1.0, t_cross):
            raise IntegrationError("Chattering on a switching surface", details={"t": t_cross, "surface": surface})
        crossings.append((t_cross, surface))
        directions[surface] = -directions[surface]
        t = t_cross
        if surface == stop_surface and len(previous) + 1 >= stop_count:
            break

    logger.debug(f"Switched integration: {segments} segments, {len(crossings)} crossings, {nfev} evaluations")
    return SwitchedResult(
        t=np.concatenate(ts),
        y=np.concatenate(ys, axis=1),
        crossings=crossings,
        stats={"segments": segments, "nfev": nfev},
    )


def time_domain_return(system: PlanarSystem, r0: float, config: Optional[IntegratorConfig] = None) -> float:
    """
    Forward-time return radius from (r0, 0) at the second crossing of w = 0.

    Agrees with ``poincare`` for counter-clockwise flows and with its inverse
    for clockwise ones.
    """
    if r0 == 0.0:
        return 0.0

    def fun(t: float, y: np.ndarray) -> np.ndarray:
        return np.array(eval_planar_rhs(system, y[0], y[1]))

    period = 2.0 * math.pi / math.sqrt(abs(np.linalg.det(system.matrix)))
    result = switched_integrate(fun, [r0, 0.0], surfaces=(0, 1), t_max=10.0 * period,
                                stop_surface=1, stop_count=2, config=config)
    if result.count(1) < 2:
        raise IntegrationError("Trajectory did not return to the section", details={"r0": r0})
    return float(abs(result.y_end[0]))
