"""
Closed-form branch predictions.

Leading-order radii of the bifurcating orbits, the criticality routing from
a coefficient report, scalar canonical models and the fold of the
second-order degenerate unfolding.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from ..coeffs.report import FIRST_ORDER_DEGENERATE, ZERO_NONLINEARITY, CoefficientReport
from ..core.types import SlopePair
from ..utils.config import Config, get_config
from ..utils.exceptions import DegenerateCoefficientError, InconclusiveError
from ..utils.logging import get_logger


class PredictionKind(str, Enum):
    SUPERCRITICAL = "supercritical"
    SUBCRITICAL = "subcritical"
    VERTICAL = "vertical"
    DEGENERATE_SECOND_ORDER = "degenerate-second-order"
    NONE = "none"


class Order(str, Enum):
    FIRST = "first"
    SECOND = "second"


@dataclass
class Prediction:
    """
    Leading-order branch r0(mu).

    First order: r0 = c * mu. Second order: r0 = sqrt(c * mu). ``carrier``
    names the coefficient that decided the kind.
    """

    kind: PredictionKind
    r0_of_mu: List[float] = field(default_factory=list)
    order: Optional[Order] = None
    carrier: Optional[str] = None
    carrier_value: Optional[float] = None
    mu_max: float = 1e-2

    @property
    def validity(self) -> str:
        """Sign condition on mu under which the branch exists."""
        if self.kind == PredictionKind.VERTICAL:
            return "mu = 0"
        if not self.r0_of_mu:
            return "none"
        return "mu > 0" if self.r0_of_mu[0] > 0.0 else "mu < 0"

    def radius(self, mu: float) -> Optional[float]:
        """Predicted r0 at mu, or None on the side without orbits."""
        if not self.r0_of_mu or self.order is None:
            return None
        value = self.r0_of_mu[0] * mu
        if value < 0.0:
            return None
        return value if self.order == Order.FIRST else math.sqrt(value)

    def in_window(self, mu: float) -> bool:
        return abs(mu) <= self.mu_max

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "order": None if self.order is None else self.order.value,
            "r0_of_mu": list(self.r0_of_mu),
            "validity": self.validity,
            "mu_max": self.mu_max,
            "carrier": self.carrier,
            "carrier_value": self.carrier_value,
        }


def _require_nonzero(value: float, name: str) -> None:
    if value == 0.0:
        raise DegenerateCoefficientError(f"{name} vanishes", details={name: value})


def r0_first(sigma_hash: float, mu: float) -> Optional[float]:
    """r0 = -3 pi mu / (2 sigma_#), or None when negative."""
    _require_nonzero(sigma_hash, "sigma_hash")
    r = -3.0 * math.pi * mu / (2.0 * sigma_hash)
    return r if r >= 0.0 else None


def r0_second(sigma_2: float, omega: float, mu: float) -> Optional[float]:
    """r0 = sqrt(2 pi omega mu / sigma_2), or None when the radicand is negative."""
    _require_nonzero(sigma_2, "sigma_2")
    radicand = 2.0 * math.pi * omega * mu / sigma_2
    return math.sqrt(radicand) if radicand >= 0.0 else None


def r0_smooth(sigma_s: float, mu: float) -> Optional[float]:
    """Smooth Hopf radius sqrt(-mu / sigma_s)."""
    _require_nonzero(sigma_s, "sigma_s")
    radicand = -mu / sigma_s
    return math.sqrt(radicand) if radicand >= 0.0 else None


def second_order_kind(sigma_2: float, omega: float) -> PredictionKind:
    """Subcritical iff omega * sigma_2 < 0."""
    _require_nonzero(sigma_2, "sigma_2")
    return PredictionKind.SUBCRITICAL if omega * sigma_2 < 0.0 else PredictionKind.SUPERCRITICAL


def bautin_fold(sigma_hash: float, sigma_2: float, omega: float) -> float:
    """Leading-order fold mu* = -2 omega sigma_#^2 / (9 pi sigma_2)."""
    _require_nonzero(sigma_2, "sigma_2")
    return -2.0 * omega * sigma_hash ** 2 / (9.0 * math.pi * sigma_2)


def fold_from_gammas(gamma2: float, gamma3: float, omega: float) -> float:
    """Fold of 2 pi mu / omega + Gamma2 r + Gamma3 r^2 = 0: mu* = omega Gamma2^2 / (8 pi Gamma3)."""
    _require_nonzero(gamma3, "Gamma3")
    return omega * gamma2 ** 2 / (8.0 * math.pi * gamma3)


def fold_radius(gamma2: float, gamma3: float) -> float:
    """Radius -Gamma2 / (2 Gamma3) at the fold."""
    _require_nonzero(gamma3, "Gamma3")
    return -gamma2 / (2.0 * gamma3)


def scalar_branch(j: int, slopes: SlopePair, sigma: float, mu: float) -> Tuple[float, ...]:
    """
    Equilibria of u' = mu u + sigma u^j [u] other than the trivial one.

    Each side of u = 0 has its own slope, so each contributes at most one
    root. At mu = 0 only the origin remains.
    """
    if j not in (1, 2):
        raise ValueError(f"j must be 1 or 2, got {j}")
    _require_nonzero(sigma, "sigma")
    if mu == 0.0:
        return (0.0,)
    roots = []
    for slope, side in ((slopes.p_plus, 1.0), (slopes.p_minus, -1.0)):
        if slope == 0.0:
            continue
        power = -mu / (sigma * slope)
        if j == 1:
            if power * side > 0.0:
                roots.append(power)
        elif power > 0.0:
            roots.append(side * math.sqrt(power))
    return tuple(sorted(roots))


def _first_order(carrier: str, value: float, mu_max: float) -> Prediction:
    kind = PredictionKind.SUBCRITICAL if value > 0.0 else PredictionKind.SUPERCRITICAL
    return Prediction(
        kind=kind, r0_of_mu=[-3.0 * math.pi / (2.0 * value)], order=Order.FIRST,
        carrier=carrier, carrier_value=value, mu_max=mu_max,
    )


def _second_order(report: CoefficientReport, config: Config) -> Prediction:
    mu_max = config.tolerances.mu_max
    value = report.value("sigma_2_effective")
    if value is None:
        return Prediction(kind=PredictionKind.DEGENERATE_SECOND_ORDER, mu_max=mu_max)
    scale = max([1.0] + [abs(e.value) for e in report.entries.values()])
    if abs(value) <= config.tolerances.degeneracy * scale:
        raise InconclusiveError(
            "First- and second-order carriers both vanish",
            details={"sigma_2_effective": value, "flags": list(report.flags)},
        )
    omega = report.omega
    return Prediction(
        kind=second_order_kind(value, omega), r0_of_mu=[2.0 * math.pi * omega / value],
        order=Order.SECOND, carrier="sigma_2_effective", carrier_value=value, mu_max=mu_max,
    )


def classify(report: CoefficientReport, config: Optional[Config] = None) -> Prediction:
    """
    Criticality and leading-order branch from a coefficient report.

    Routes on sigma_# (sigma_tilde for general slopes, (3 pi omega/2) Sigma
    for a general linear part) and falls back to the second-order carrier
    when the first order is degenerate. Vanishing nonlinearity gives a
    vertical branch.
    """
    config = config or get_config()
    mu_max = config.tolerances.mu_max
    logger = get_logger()

    if ZERO_NONLINEARITY in report.flags:
        prediction = Prediction(kind=PredictionKind.VERTICAL, mu_max=mu_max)
    elif report.kind == "planar-general":
        sigma = report.value("Sigma_tilde")
        if FIRST_ORDER_DEGENERATE in report.flags:
            prediction = Prediction(kind=PredictionKind.DEGENERATE_SECOND_ORDER, mu_max=mu_max)
        else:
            prediction = _first_order("Sigma_tilde", 1.5 * math.pi * report.omega * sigma, mu_max)
    elif FIRST_ORDER_DEGENERATE in report.flags:
        prediction = _second_order(report, config)
    else:
        name = "sigma_hash" if "sigma_hash" in report else "sigma_tilde"
        prediction = _first_order(name, report.value(name), mu_max)

    logger.debug(
        f"Prediction: {prediction.kind.value} via {prediction.carrier}"
        f" (order {None if prediction.order is None else prediction.order.value})"
    )
    return prediction
