"""
Angle-parametrized integration with kink-aligned Cash-Karp steps.

The state is integrated in phi rather than time:

    dr/dphi = r_dot / phi_dot,  du/dphi = u_dot / phi_dot,  dt/dphi = 1 / phi_dot

Since the switching lines sit at known angles, every step ends exactly on
them and the classical order of the embedded pair survives the C^1-only
right-hand side.
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence, Tuple, Union

import numpy as np

from ..averaging.quadrature import panel_breaks
from ..core.polar import TWO_PI, PolarField
from ..core.types import PlanarSystem, System3D, SystemND
from ..utils.config import IntegratorConfig, get_config
from ..utils.exceptions import AngularSpeedError, IntegrationError, RadiusEscapedError
from ..utils.logging import get_logger

AnySystem = Union[PlanarSystem, System3D, SystemND]

# Cash-Karp 5(4)
NODES = np.array([0.0, 1 / 5, 3 / 10, 3 / 5, 1.0, 7 / 8])
TABLE = tuple(np.array(row) for row in (
    (1 / 5,),
    (3 / 40, 9 / 40),
    (3 / 10, -9 / 10, 6 / 5),
    (-11 / 54, 5 / 2, -70 / 27, 35 / 27),
    (1631 / 55296, 175 / 512, 575 / 13824, 44275 / 110592, 253 / 4096),
))
WEIGHTS = np.array([37 / 378, 0.0, 250 / 621, 125 / 594, 0.0, 512 / 1771])
ERROR = np.array([-277 / 64512, 0.0, 6925 / 370944, -6925 / 202752, -277 / 14336, 277 / 7084])

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 5.0


@dataclass
class Trajectory:
    """
    Samples of an angle-parametrized solution.

    ``states`` has columns (r, u_1..u_k); ``time`` is the elapsed physical
    time, negative when the flow turns clockwise.
    """

    phi: np.ndarray
    states: np.ndarray
    time: np.ndarray
    stats: Dict[str, Any] = field(default_factory=dict)

    @property
    def r(self) -> np.ndarray:
        return self.states[:, 0]

    @property
    def u(self) -> Optional[np.ndarray]:
        if self.states.shape[1] == 1:
            return None
        return self.states[:, 1:]

    @property
    def r_end(self) -> float:
        return float(self.states[-1, 0])

    @property
    def u_end(self) -> Optional[np.ndarray]:
        return None if self.states.shape[1] == 1 else self.states[-1, 1:].copy()

    @property
    def elapsed(self) -> float:
        return float(self.time[-1] - self.time[0])

    @property
    def period(self) -> float:
        return abs(self.elapsed)


class PhiIntegrator:
    """Embedded Runge-Kutta integrator in the polar angle."""

    def __init__(self, system: AnySystem, config: Optional[IntegratorConfig] = None):
        self.field = PolarField(system)
        self.config = config or get_config().integrator
        self.dim = self.field.dim
        self.logger = get_logger()

    def _rhs(self, phi: float, y: np.ndarray) -> np.ndarray:
        u = None
        if self.dim == 1:
            u = y[1]
        elif self.dim > 1:
            u = y[1:-1]
        angular, r_dot, u_dot = self.field.rates(phi, y[0], u)
        if abs(angular) < self.config.min_angular_speed:
            raise AngularSpeedError(
                "Angular speed vanished during integration",
                details={"phi": phi, "r": float(y[0]), "angular_speed": angular},
            )
        out = np.empty_like(y)
        out[0] = r_dot / angular
        if self.dim:
            out[1:-1] = np.asarray(u_dot, dtype=float) / angular
        out[-1] = 1.0 / angular
        return out

    def _step(self, phi: float, y: np.ndarray, h: float) -> Tuple[np.ndarray, np.ndarray]:
        k = np.empty((6, y.size))
        k[0] = self._rhs(phi, y)
        for i, row in enumerate(TABLE, start=1):
            k[i] = self._rhs(phi + NODES[i] * h, y + h * (row @ k[:i]))
        return y + h * (WEIGHTS @ k), h * (ERROR @ k)

    def _check_radius(self, phi: float, y: np.ndarray) -> None:
        if y[0] > self.config.r_max or not np.all(np.isfinite(y)):
            raise RadiusEscapedError(
                f"Radius left the neighbourhood r <= {self.config.r_max}",
                details={"phi": phi, "r": float(y[0])},
            )

    def run(
        self,
        r0: float,
        u0: Union[None, float, Sequence[float]] = None,
        span: float = TWO_PI,
        fixed_step: Optional[float] = None,
    ) -> Trajectory:
        """
        Integrate from phi = 0 to phi = span.

        With ``fixed_step`` every kink-to-kink panel is split into equal
        steps of at most that size and no error control is applied.
        """
        cfg = self.config
        u_init = np.zeros(self.dim) if u0 is None else np.atleast_1d(np.asarray(u0, dtype=float))
        if u_init.size != self.dim:
            raise IntegrationError(f"Expected {self.dim} transverse components, got {u_init.size}")
        y = np.concatenate([[float(r0)], u_init, [0.0]])
        phis, states = [0.0], [y.copy()]
        steps = rejected = 0
        h = min(0.05, span) if fixed_step is None else fixed_step

        breaks = panel_breaks(self.field.kinks, 0.0, span)
        for a, b in zip(breaks[:-1], breaks[1:]):
            phi = float(a)
            if fixed_step is not None:
                n = max(1, math.ceil((b - a) / fixed_step - 1e-12))
                for i in range(n):
                    hi = (b - a) / n
                    y, _ = self._step(phi, y, hi)
                    phi = a + (i + 1) * hi
                    steps += 1
                    self._check_radius(phi, y)
                    phis.append(phi)
                    states.append(y.copy())
                continue
            while b - phi > 1e-14:
                if steps + rejected > cfg.max_steps:
                    raise IntegrationError("Step budget exhausted", details={"phi": phi, "steps": steps})
                h_try = min(h, b - phi)
                y_new, err = self._step(phi, y, h_try)
                scale = cfg.rtol * np.maximum(np.abs(y), np.abs(y_new)) + cfg.atol
                err_norm = float(np.max(np.abs(err) / scale))
                factor = MAX_FACTOR if err_norm == 0.0 else SAFETY * err_norm ** -0.2
                factor = min(MAX_FACTOR, max(MIN_FACTOR, factor))
                if err_norm <= 1.0:
                    phi = b if b - (phi + h_try) < 1e-14 else phi + h_try
                    y = y_new
                    steps += 1
                    self._check_radius(phi, y)
                    phis.append(phi)
                    states.append(y.copy())
                    # a step cut short at a kink says little about the next one
                    h = max(h, h_try * factor) if h_try < h else h_try * factor
                else:
                    rejected += 1
                    h = h_try * factor
                    if h < 1e-14 * max(1.0, abs(phi)):
                        raise IntegrationError("Step size underflow", details={"phi": phi, "h": h})

        arr = np.array(states)
        self.logger.debug(f"phi-integration: {steps} steps, {rejected} rejected, r_end={arr[-1, 0]:.6g}")
        return Trajectory(
            phi=np.array(phis),
            states=arr[:, :-1],
            time=arr[:, -1],
            stats={"steps": steps, "rejected": rejected, "evaluations": 6 * (steps + rejected)},
        )


def integrate_phi(
    system: AnySystem,
    r0: float,
    span: float = TWO_PI,
    u0: Union[None, float, Sequence[float]] = None,
    config: Optional[IntegratorConfig] = None,
    fixed_step: Optional[float] = None,
) -> Trajectory:
    """Integrate the angle-parametrized equations over [0, span]."""
    if r0 < 0.0:
        raise IntegrationError("Initial radius must be non-negative", details={"r0": r0})
    return PhiIntegrator(system, config).run(r0, u0, span, fixed_step)
