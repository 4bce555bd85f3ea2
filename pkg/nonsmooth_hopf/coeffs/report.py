"""
Coefficient report: every derived scalar with its provenance.

Each entry stores the primary value, the method that produced it and, when
available, the value from the other method so that drift between closed
form and quadrature is visible in the emitted JSON.
"""

import json
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Union

import numpy as np

from ..core.types import PlanarSystem, System3D, SystemND
from ..utils.config import Config, get_config
from ..utils.logging import get_logger

CLOSED_FORM = "closed-form"
QUADRATURE = "quadrature"

ZERO_NONLINEARITY = "zero nonlinearity"
FIRST_ORDER_DEGENERATE = "first-order degenerate"


def nonlinearity_vanishes(system: Union[PlanarSystem, System3D, SystemND]) -> bool:
    """True when nothing but the linear part acts on the planar block."""
    planar = system if isinstance(system, PlanarSystem) else system.planar
    if not (planar.quad.is_zero and planar.smooth.is_zero):
        return False
    if isinstance(system, System3D):
        return not any((system.c6, system.c7, system.c8, system.c9))
    if isinstance(system, SystemND):
        return not any(np.any(c) for c in (system.c6, system.c7, system.c8, system.c9))
    return True


@dataclass
class CoefficientEntry:
    """One coefficient with its cross-check."""

    value: float
    method: str = CLOSED_FORM
    cross_check: Optional[float] = None
    tolerance: Optional[float] = None

    @property
    def abs_diff(self) -> Optional[float]:
        if self.cross_check is None:
            return None
        return abs(self.value - self.cross_check)

    @property
    def consistent(self) -> bool:
        """True when there is no cross-check or both paths agree within tolerance."""
        if self.cross_check is None or self.tolerance is None:
            return True
        return self.abs_diff <= self.tolerance * max(1.0, abs(self.value))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": self.value,
            "method": self.method,
            "cross_check": self.cross_check,
            "abs_diff": self.abs_diff,
        }


def closed_entry(value: float, quadrature: Optional[float], tolerance: float) -> CoefficientEntry:
    return CoefficientEntry(float(value), CLOSED_FORM, None if quadrature is None else float(quadrature), tolerance)


def quadrature_entry(value: float, closed: Optional[float] = None, tolerance: Optional[float] = None) -> CoefficientEntry:
    return CoefficientEntry(float(value), QUADRATURE, None if closed is None else float(closed), tolerance)


@dataclass
class CoefficientReport:
    """
    All derived scalars of one system.

    Plain coefficients (sigma_hash, sigma_2, S_q, Lambda, Sigma, Gamma2, ...)
    live in ``entries``; the 3D return-map ledger lives in ``gamma_bar`` and
    ``delta_bar`` keyed by index ("10", "20", "02", "11", ...).
    """

    kind: str
    mu: float
    omega: float
    entries: Dict[str, CoefficientEntry] = field(default_factory=dict)
    gamma_bar: Dict[str, CoefficientEntry] = field(default_factory=dict)
    delta_bar: Dict[str, CoefficientEntry] = field(default_factory=dict)
    auxiliary: Dict[str, float] = field(default_factory=dict)
    flags: List[str] = field(default_factory=list)

    def __contains__(self, name: str) -> bool:
        return name in self.entries

    def __getitem__(self, name: str) -> CoefficientEntry:
        return self.entries[name]

    def value(self, name: str) -> Optional[float]:
        entry = self.entries.get(name)
        return None if entry is None else entry.value

    def all_entries(self) -> Dict[str, CoefficientEntry]:
        out = dict(self.entries)
        out.update({f"gamma_bar_{k}": v for k, v in self.gamma_bar.items()})
        out.update({f"delta_bar_{k}": v for k, v in self.delta_bar.items()})
        return out

    def inconsistent(self) -> List[str]:
        """Names of entries whose two computation paths disagree."""
        return [name for name, entry in self.all_entries().items() if not entry.consistent]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "mu": self.mu,
            "omega": self.omega,
            "coefficients": {k: v.to_dict() for k, v in self.entries.items()},
            "gamma_bar": {k: v.to_dict() for k, v in self.gamma_bar.items()},
            "delta_bar": {k: v.to_dict() for k, v in self.delta_bar.items()},
            "auxiliary": dict(self.auxiliary),
            "flags": list(self.flags),
        }

    def to_json(self, indent: Optional[int] = None) -> str:
        return json.dumps(self.to_dict(), indent=indent, allow_nan=True)


def _planar_entries(report: CoefficientReport, sys: PlanarSystem, config: Config) -> None:
    from . import planar as pc

    tol = config.tolerances.quadrature
    q, s, omega = sys.quad, sys.smooth, sys.omega
    entries = report.entries

    entries["sigma_tilde"] = closed_entry(pc.sigma_tilde(q), pc.sigma_tilde_by_quadrature(q), tol)
    if q.all_abs:
        entries["sigma_hash"] = closed_entry(pc.sigma_hash(q), entries["sigma_tilde"].cross_check, tol)
        entries["sigma_2"] = closed_entry(pc.sigma_2(q), pc.sigma_2_by_quadrature(q), tol)
        entries["sigma_cubic"] = closed_entry(pc.sigma_cubic(q), None, tol)
        entries["sigma_2_effective"] = closed_entry(pc.sigma_2_effective(q, s, omega), None, tol)
    else:
        report.flags.append("general slopes: sigma_hash and sigma_2 not defined")
    entries["S_q"] = closed_entry(pc.s_q(s), pc.s_q_by_quadrature(s), tol)
    entries["S_c"] = closed_entry(pc.s_c(s), pc.s_c_by_quadrature(s), tol)
    entries["sigma_s"] = closed_entry(pc.sigma_s(s, omega), None, tol)
    if q.all_abs:
        gamma2, gamma3 = pc.gamma23_planar(sys)
        quad2, quad3 = pc.gamma23_by_quadrature(sys)
        entries["Gamma2"] = closed_entry(gamma2, quad2, tol)
        entries["Gamma3"] = closed_entry(gamma3, quad3, tol)
    else:
        quad2, _ = pc.gamma23_by_quadrature(sys)
        entries["Gamma2"] = closed_entry(4.0 * pc.sigma_tilde(q) / (3.0 * omega), quad2, tol)

    if math.isclose(pc.sigma_tilde(q), 0.0, abs_tol=pc.degeneracy_threshold(sys, config.tolerances.degeneracy)):
        report.flags.append(FIRST_ORDER_DEGENERATE)


def _general_entries(report: CoefficientReport, sys: PlanarSystem, config: Config) -> None:
    from .general import lambda_by_quadrature, lambda_general, sigma_general

    tol = config.tolerances.quadrature
    m = sys.matrix
    report.entries["Lambda"] = closed_entry(lambda_general(m), lambda_by_quadrature(m), tol)
    sigma = sigma_general(m, sys.quad)
    name = "Sigma_tilde" if sigma.general_slopes else "Sigma"
    report.entries[name] = closed_entry(sigma.closed_form, sigma.quadrature, tol)
    if not sigma.general_slopes:
        report.entries["Sigma_tilde"] = closed_entry(sigma.closed_form, sigma.quadrature, tol)
    report.entries["Sigma_original_coordinates"] = quadrature_entry(sigma.original_coordinates)
    g = sigma.geometry
    report.auxiliary.update({"C": g.C, "D": g.D, "phi_hat": g.phi_hat, "theta_hat": g.theta_hat, "det_T": g.det})
    if math.isclose(sigma.closed_form, 0.0, abs_tol=config.tolerances.degeneracy * (1.0 + sys.nonlinear_scale())):
        report.flags.append(FIRST_ORDER_DEGENERATE)


def build_report(
    system: Union[PlanarSystem, System3D, SystemND],
    config: Optional[Config] = None,
) -> CoefficientReport:
    """Compute every coefficient that applies to ``system``."""
    config = config or get_config()
    logger = get_logger()

    if isinstance(system, PlanarSystem):
        report = CoefficientReport(
            kind="planar-nf" if system.is_normal_form else "planar-general",
            mu=system.mu, omega=system.omega,
        )
        if system.is_normal_form:
            _planar_entries(report, system, config)
        else:
            _general_entries(report, system, config)
    elif isinstance(system, System3D):
        from .ledger3d import ledger_3d

        report = ledger_3d(system, config)
    elif isinstance(system, SystemND):
        report = CoefficientReport(kind="nd", mu=system.mu, omega=system.omega)
        _planar_entries(report, system.planar, config)
        report.flags.append("transverse coupling handled numerically (monodromy)")
    else:
        raise TypeError(f"Unsupported system type: {type(system).__name__}")

    if nonlinearity_vanishes(system):
        report.flags.append(ZERO_NONLINEARITY)
    for name, entry in report.all_entries().items():
        logger.debug(f"{name} = {entry.value:.12g} ({entry.method})")
    for name in report.inconsistent():
        logger.warning(f"Closed form and quadrature disagree for {name}")
    return report
