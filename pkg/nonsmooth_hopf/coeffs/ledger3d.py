"""
Return-map ledger of the three-dimensional system.

With p1 = c1/omega and k1 = mu/omega the once-around map of (u, r) from
phi = 0 to phi = 2pi reads

    u(2pi) - u0 = g10 u0 + g20 u0^2 + g02 r0^2 + g11 u0 r0 + g03 r0^3 + ...
    r(2pi) - r0 = d01 r0 + d02 r0^2 + d11 u0 r0 + ...

Every entry is the value at 2pi of a linear ODE in phi and is therefore a
single (or nested) integral of the polar functions chi1, Omega0, Upsilon,
chi2 and Omega1. Those integrals are the primary values; the printed
closed forms (exact or to first order in mu) ride along as cross-checks.
"""

import math
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from ..averaging.quadrature import nested_integral, piecewise_integral
from ..core.polar import TWO_PI, AngleFunction, polar_decompose
from ..core.types import System3D
from ..utils.config import Config, get_config
from ..utils.exceptions import DegenerateCoefficientError, DegenerateTransverseError
from ..utils.logging import get_logger
from .planar import gamma23_by_quadrature, gamma23_planar, sigma_hash, sigma_tilde
from .report import CLOSED_FORM, QUADRATURE, CoefficientEntry, CoefficientReport

DEGENERATE_TRANSVERSE = "degenerate transverse direction"
DEGENERATE_CENTRE = "degenerate centre balance"


def _e_over_c1(c1: float, omega: float) -> float:
    """(e^{2 pi c1/omega} - 1) / c1 with its limit 2pi/omega at c1 = 0."""
    if c1 == 0.0:
        return TWO_PI / omega
    return math.expm1(TWO_PI * c1 / omega) / c1


def auxiliary_scalars(sys: System3D) -> Dict[str, float]:
    """tau1..tau3, P, Q, R, rho1, rho2 by their literal definitions."""
    q = sys.planar.quad
    c1, omega = sys.c1, sys.omega
    tau1 = 4 * q.a22 + 5 * q.a21 - 5 * q.b12 - 4 * q.b11
    tau2 = 2 * q.a22 + q.a21 - q.b12 - 2 * q.b11
    tau3 = q.a11 - q.a12 - q.b21 + q.b22
    rho1 = (sys.c6 * c1 ** 2 - sys.c7 * c1 * omega + 2 * sys.c6 * omega ** 2
            - sys.c8 * c1 * omega + 2 * sys.c9 * omega ** 2)
    rho2 = (sys.c8 * c1 ** 2 - sys.c9 * c1 * omega + 2 * sys.c8 * omega ** 2
            + sys.c6 * c1 * omega - 2 * sys.c7 * omega ** 2)
    return {
        "tau1": tau1,
        "tau2": tau2,
        "tau3": tau3,
        "P": 3 * math.pi * (2 * tau2 - q.a11 + q.b21) + 4 * tau3,
        "Q": -3 * math.pi * (q.b11 + q.a21) + 2 * tau1,
        "R": TWO_PI * rho1 - rho2,
        "rho1": rho1,
        "rho2": rho2,
    }


def gamma_hash(sys: System3D) -> float:
    """gamma_# = 2 h21 + c5 + pi h22, the degenerate-direction carrier."""
    return 2.0 * sys.h21 + sys.c5 + math.pi * sys.h22


def _h_all_abs(sys: System3D) -> bool:
    return all(pair.is_abs for pair in sys.h_slopes)


def _planar_closed_forms_apply(sys: System3D) -> bool:
    return sys.planar.quad.all_abs and not any(sys.planar.smooth.quadratic)


def gamma02_tilde_closed_form(sys: System3D) -> float:
    """
    mu-independent part of gamma_bar_02 for c1 != 0 and (-1, +1) h-slopes:
    e^{2pi p1}/omega * integral of e^{-p1 s} Upsilon(s).
    """
    c1, omega = sys.c1, sys.omega
    if c1 == 0.0:
        raise DegenerateTransverseError("gamma02_tilde needs c1 != 0", details={"c1": c1})
    p = c1 / omega
    bracket = (2.0 * (math.exp(1.5 * math.pi * p) - math.exp(0.5 * math.pi * p))
               * (c1 * sys.h21 - 2.0 * sys.h11 * omega)
               + (math.exp(TWO_PI * p) - 2.0 * math.exp(math.pi * p) + 1.0)
               * (c1 * sys.h12 + 2.0 * sys.h22 * omega)
               + math.expm1(TWO_PI * p)
               * (c1 * sys.h21 + c1 * sys.c5 + c1 ** 2 * sys.h11 / omega + 2.0 * sys.h11 * omega))
    return omega / (c1 * (c1 ** 2 + 4.0 * omega ** 2)) * bracket


def gamma02_tilde_by_quadrature(sys: System3D) -> float:
    polar = polar_decompose(sys)
    p = sys.c1 / sys.omega
    weighted = polar.Upsilon.map(lambda s, v: np.exp(p * (TWO_PI - s)) * v, "e*Upsilon")
    return piecewise_integral(weighted) / sys.omega


def gamma03_centre_closed_form(sys: System3D) -> Optional[float]:
    """
    -(4 / (3 omega^2)) (sigma_# h21 + (b21 + 2 b22) c5) when only h21 and c5
    force u; None otherwise.
    """
    q = sys.planar.quad
    if not (_h_all_abs(sys) and _planar_closed_forms_apply(sys)):
        return None
    if any((sys.h11, sys.h12, sys.h22, sys.c3, sys.c4)):
        return None
    return -4.0 * (sigma_hash(q) * sys.h21 + (q.b21 + 2.0 * q.b22) * sys.c5) / (3.0 * sys.omega ** 2)


def gamma03_centre(sys: System3D, config: Optional[Config] = None) -> float:
    """
    r0^3 coefficient of u(2pi) - u0 at c1 = mu = 0:

        (1/omega^2) * integral of Upsilon (2 X - Omega1) + P (c3 cos + c4 sin)

    with X and P the integrals of chi2 and Upsilon from 0 to phi. On a
    branch with r0 = O(mu) this term is as large as gamma_bar_02 r0^2.
    """
    config = config or get_config()
    polar = polar_decompose(sys.with_mu(0.0))
    tangential = AngleFunction(lambda s: sys.c3 * np.cos(s) + sys.c4 * np.sin(s), name="c3 cos + c4 sin")
    direct = piecewise_integral(polar.Upsilon * polar.Omega1, config=config.quadrature)
    radial = nested_integral(polar.Upsilon, polar.chi2, config=config.quadrature)
    coupled = nested_integral(tangential, polar.Upsilon, config=config.quadrature)
    return (2.0 * radial - direct + coupled) / sys.omega ** 2


def gamma_hash_effective(sys: System3D, gamma03: Optional[float] = None) -> float:
    """
    gamma_# with the cubic forcing folded in along r0 = -3 pi mu / (2 sigma_tilde):

        gamma_# + 3 omega^2 gamma_bar_03 / (2 sigma_tilde)

    Two centre-direction orbits need omega c2 mu times this to be positive.
    """
    sigma = sigma_tilde(sys.planar.quad)
    if sigma == 0.0:
        raise DegenerateCoefficientError(
            "Planar quadratic coefficient vanishes; the centre-direction balance is undefined",
            details={"sigma_tilde": sigma},
        )
    g03 = gamma03_centre(sys) if gamma03 is None else gamma03
    return gamma_hash(sys) + 3.0 * sys.omega ** 2 * g03 / (2.0 * sigma)


def _order_tol(config: Config, mu: float) -> float:
    return config.tolerances.quadrature + 100.0 * mu * mu


@np.errstate(over="ignore")
def _quadratures(sys: System3D) -> Dict[str, float]:
    """Defining integrals of the ledger entries at the system's mu."""
    polar = polar_decompose(sys)
    omega, mu, c1 = sys.omega, sys.mu, sys.c1
    p1, k1 = c1 / omega, mu / omega

    p2 = (sys.c2 * omega - c1 * polar.Omega0) / omega ** 2
    p4 = (polar.Omega0.map(lambda s, _: sys.c3 * np.cos(s) + sys.c4 * np.sin(s)) / omega
          - c1 * polar.Omega1 / omega ** 2)
    k2 = (polar.chi2 * omega - mu * polar.Omega1) / omega ** 2
    k3 = (polar.chi1 * omega - mu * polar.Omega0) / omega ** 2

    def weight(f, a, b):
        return f.map(lambda s, v: np.exp(a + b * s) * v)

    return {
        "g20": piecewise_integral(weight(p2, TWO_PI * p1, p1)),
        "g02": piecewise_integral(weight(polar.Upsilon, TWO_PI * p1, (2.0 * mu - c1) / omega)) / omega,
        "g11": piecewise_integral(weight(p4, TWO_PI * p1, k1)),
        "d01": piecewise_integral(AngleFunction(lambda s: k1 * np.exp(k1 * s), name="k1*e")),
        "d02": piecewise_integral(weight(k2, TWO_PI * k1, k1)),
        "d11": piecewise_integral(weight(k3, TWO_PI * k1, p1)),
    }


def ledger_3d(sys: System3D, config: Optional[Config] = None) -> CoefficientReport:
    """
    Coefficient report of a System3D: the planar-block coefficients plus the
    gamma_bar / delta_bar ledger, the auxiliary scalars and, depending on c1,
    gamma_hash or Gamma3_tilde.
    """
    from .report import _planar_entries

    config = config or get_config()
    logger = get_logger()
    omega, mu, c1 = sys.omega, sys.mu, sys.c1
    report = CoefficientReport(kind="3d", mu=mu, omega=omega)
    _planar_entries(report, sys.planar, config)

    aux = auxiliary_scalars(sys)
    report.auxiliary.update(aux)
    tol = config.tolerances.quadrature
    order_tol = _order_tol(config, mu)
    quad = _quadratures(sys)
    ratio = _e_over_c1(c1, omega)
    e_big = math.expm1(TWO_PI * c1 / omega)
    growth = math.exp(TWO_PI * c1 / omega)
    lam = c1 ** 2 + 4.0 * omega ** 2

    g, d = report.gamma_bar, report.delta_bar
    g["10"] = CoefficientEntry(e_big, CLOSED_FORM)
    g["20"] = CoefficientEntry(
        growth * ratio * (sys.c2 - c1 * aux["rho2"] / (omega * lam)), CLOSED_FORM, quad["g20"], tol
    )
    d["01"] = CoefficientEntry(math.expm1(TWO_PI * mu / omega), CLOSED_FORM, quad["d01"], tol)
    d11 = ratio * (omega * aux["rho1"] + aux["R"] * mu) / (omega * lam)
    d["11"] = CoefficientEntry(quad["d11"], QUADRATURE, d11, order_tol)

    if _planar_closed_forms_apply(sys):
        sig = sigma_hash(sys.planar.quad)
        g11 = (2.0 / (3.0 * omega ** 2)) * growth * (
            c1 * (2.0 * aux["tau2"] + aux["P"] * mu / (3.0 * omega)) - 3.0 * math.pi * sys.c4 * mu
        )
        d02 = (2.0 / (3.0 * omega)) * (
            sig * (2.0 + 6.0 * math.pi * mu / omega) + aux["Q"] * mu / (3.0 * omega)
        )
        g["11"] = CoefficientEntry(quad["g11"], QUADRATURE, g11, order_tol)
        d["02"] = CoefficientEntry(quad["d02"], QUADRATURE, d02, order_tol)
    else:
        g["11"] = CoefficientEntry(quad["g11"], QUADRATURE)
        d["02"] = CoefficientEntry(quad["d02"], QUADRATURE)

    if c1 == 0.0:
        report.flags.append(DEGENERATE_TRANSVERSE)
        gh = gamma_hash(sys)
        report.entries["gamma_hash"] = CoefficientEntry(gh, CLOSED_FORM)
        closed02 = -math.pi * gh * mu / omega ** 2 if _h_all_abs(sys) else None
        g["02"] = CoefficientEntry(quad["g02"], QUADRATURE, closed02, order_tol)
        g03 = gamma03_centre(sys, config)
        g["03"] = CoefficientEntry(g03, QUADRATURE, gamma03_centre_closed_form(sys), tol)
        if sigma_tilde(sys.planar.quad) != 0.0:
            effective = gamma_hash_effective(sys, g03)
            report.entries["gamma_hash_eff"] = CoefficientEntry(effective, QUADRATURE)
            if abs(effective) < config.tolerances.degeneracy * max(1.0, abs(gh)):
                report.flags.append(DEGENERATE_CENTRE)
        logger.debug(f"c1 = 0: gamma_hash = {gh:.6g}, gamma_bar_03 = {g03:.6g}")
    else:
        g["02"] = CoefficientEntry(quad["g02"], QUADRATURE)
        if _h_all_abs(sys):
            g["02_tilde"] = CoefficientEntry(
                gamma02_tilde_closed_form(sys), CLOSED_FORM, gamma02_tilde_by_quadrature(sys), tol
            )
        if sys.planar.quad.all_abs:
            result = gamma3_tilde(sys, config)
            report.entries["Gamma3_tilde"] = CoefficientEntry(
                result.value, QUADRATURE, result.closed_form, tol
            )
            d["03_tilde"] = CoefficientEntry(result.delta03, QUADRATURE)
    return report


@dataclass(frozen=True)
class Gamma3TildeResult:
    """Gamma3_tilde with its ingredients."""

    value: float
    gamma3: float
    delta03: float
    delta11: float
    gamma02: float
    gamma10: float
    closed_form: Optional[float] = None

    @property
    def correction(self) -> float:
        return self.value - self.gamma3


def gamma3_tilde_closed_form(sys: System3D) -> float:
    """h = 0 closed form: Gamma3 - c5 pi [2 omega (c6 - c9) + c1 (c7 + c8)] / (4 omega (c1^2 + 4 omega^2))."""
    c1, omega = sys.c1, sys.omega
    _, gamma3 = gamma23_planar(sys.planar.with_mu(0.0))
    correction = (-sys.c5 * math.pi * (2.0 * omega * (sys.c6 - sys.c9) + c1 * (sys.c7 + sys.c8))
                  / (4.0 * omega * (c1 ** 2 + 4.0 * omega ** 2)))
    return gamma3 + correction


@np.errstate(over="ignore")
def gamma3_tilde(sys: System3D, config: Optional[Config] = None) -> Gamma3TildeResult:
    """
    Gamma3_tilde = delta03_tilde - delta11_tilde * gamma02_tilde / gamma_bar_10.

    delta03_tilde = Gamma3 + (1/omega^2) * integral of chi1(s) times the
    inner integral of e^{c1 (s - tau)/omega} Upsilon(tau) over [0, s].
    Everything is evaluated at mu = 0.
    """
    c1, omega = sys.c1, sys.omega
    if c1 == 0.0:
        raise DegenerateTransverseError(
            "Gamma3_tilde requires a hyperbolic transverse direction (c1 != 0)",
            details={"c1": c1},
        )
    config = config or get_config()
    base = sys.with_mu(0.0)
    polar = polar_decompose(base)
    p = c1 / omega
    _, gamma3 = gamma23_by_quadrature(base.planar)

    outer = polar.chi1.map(lambda s, v: np.exp(p * s) * v, "e*chi1")
    inner = polar.Upsilon.map(lambda tau, v: np.exp(-p * tau) * v, "e*Upsilon")
    delta03 = gamma3 + nested_integral(outer, inner, config=config.quadrature) / omega ** 2
    delta11 = piecewise_integral(polar.chi1.map(lambda s, v: np.exp(p * s) * v)) / omega
    gamma02 = gamma02_tilde_by_quadrature(base)
    gamma10 = math.expm1(TWO_PI * p)
    value = delta03 - delta11 * gamma02 / gamma10

    closed = gamma3_tilde_closed_form(base) if base.h_is_zero and base.planar.quad.all_abs else None
    get_logger().debug(f"Gamma3_tilde = {value:.12g} (closed form {closed})")
    return Gamma3TildeResult(
        value=value, gamma3=gamma3, delta03=delta03, delta11=delta11,
        gamma02=gamma02, gamma10=gamma10, closed_form=closed,
    )
