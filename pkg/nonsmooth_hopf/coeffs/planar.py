"""
Closed-form coefficients of planar normal-form systems.

Every closed form has a quadrature counterpart (``*_by_quadrature``) built
from the polar angle functions, so that the two paths can be compared.
"""

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

from ..averaging.quadrature import nested_integral, piecewise_integral
from ..core.polar import polar_decompose
from ..core.types import NonsmoothQuadCoeffs, PlanarSystem, SmoothCoeffs
from ..utils.exceptions import ModelError, SlopeMismatchError

QUARTER_PI = 0.25 * math.pi


def _require_abs(q: NonsmoothQuadCoeffs, name: str) -> None:
    if not q.all_abs:
        raise SlopeMismatchError(
            f"{name} requires slopes (-1, +1); use sigma_tilde for general slopes",
            details={"slopes": [p.to_list() for p in q.slopes]},
        )


def _require_normal_form(sys: PlanarSystem, name: str) -> None:
    if not sys.is_normal_form:
        raise ModelError(f"{name} requires a normal-form linear part")


def sigma_hash(q: NonsmoothQuadCoeffs) -> float:
    """First non-smooth Lyapunov coefficient 2a11 + a12 + b21 + 2b22."""
    _require_abs(q, "sigma_hash")
    return 2.0 * q.a11 + q.a12 + q.b21 + 2.0 * q.b22


def sigma_tilde(q: NonsmoothQuadCoeffs) -> float:
    """Generalized-slope coefficient; equals sigma_hash for slopes (-1, +1)."""
    return (q.a11 * q.alpha[0].jump + 0.5 * q.a12 * q.alpha[1].jump
            + 0.5 * q.b21 * q.beta[2].jump + q.b22 * q.beta[3].jump)


def sigma_2(q: NonsmoothQuadCoeffs) -> float:
    """Second-order carrier deciding criticality when sigma_hash vanishes."""
    _require_abs(q, "sigma_2")
    third = (q.b12 * q.a11 - q.b21 * q.a22 - q.a21 * q.b22 + q.a12 * q.b11
             - 2.0 * q.a11 * q.a22 - 2.0 * q.a12 * q.a21
             + 2.0 * q.b12 * q.b21 + 2.0 * q.b11 * q.b22)
    quarter = (q.b12 * q.b22 - q.a12 * q.a22 - q.a11 * q.a21 + q.b21 * q.b11
               + 2.0 * q.a11 * q.b11 - 2.0 * q.b22 * q.a22)
    return third / 3.0 + QUARTER_PI * quarter


def s_q(s: SmoothCoeffs) -> float:
    return (s.a1 * s.a2 + s.a2 * s.a3 - s.b1 * s.b2 - s.b2 * s.b3
            - 2.0 * s.a1 * s.b1 + 2.0 * s.a3 * s.b3)


def s_c(s: SmoothCoeffs) -> float:
    return 3.0 * s.ca1 + s.ca2 + s.cb3 + 3.0 * s.cb4


def sigma_s(s: SmoothCoeffs, omega: float) -> float:
    """Classical first Lyapunov coefficient of the smooth terms."""
    if omega == 0.0:
        raise ModelError("sigma_s requires omega != 0")
    return s_q(s) / (8.0 * omega) + s_c(s) / 8.0


def smoothed_sigma(q: NonsmoothQuadCoeffs, weights: Sequence[float]) -> float:
    """Sign carrier of a smoothened modulus with per-term weights."""
    w1, w2, w3, w4 = weights
    return 3.0 * w1 * q.a11 + w2 * q.a12 + w3 * q.b21 + 3.0 * w4 * q.b22


def sigma_cubic(q: NonsmoothQuadCoeffs) -> float:
    """Carrier obtained when every |x| is replaced by x^2 (equal weights)."""
    return smoothed_sigma(q, (1.0, 1.0, 1.0, 1.0))


def sigma_2_effective(q: NonsmoothQuadCoeffs, s: SmoothCoeffs, omega: float) -> float:
    """sigma_2 with the smooth quadratic and cubic contributions folded in."""
    return sigma_2(q) - QUARTER_PI * s_q(s) - QUARTER_PI * omega * s_c(s)


def gamma23_planar(sys: PlanarSystem) -> Tuple[float, float]:
    """Return-map coefficients (Gamma2, Gamma3) at mu = 0."""
    _require_normal_form(sys, "gamma23_planar")
    omega = sys.omega
    sig = sigma_tilde(sys.quad)
    gamma2 = 4.0 * sig / (3.0 * omega)
    cubic = (s_q(sys.smooth) / (8.0 * omega ** 2) + s_c(sys.smooth) / (8.0 * omega)
             - sigma_2(sys.quad) / (2.0 * math.pi * omega ** 2))
    return gamma2, gamma2 ** 2 + 2.0 * math.pi * cubic


def degeneracy_threshold(sys: PlanarSystem, tol: float) -> float:
    return tol * (1.0 + sys.nonlinear_scale())


# --- quadrature counterparts ---


@dataclass(frozen=True)
class PlanarIntegrals:
    """Period integrals of the polar functions at mu = 0."""

    chi2: float
    chi2_omega1: float
    chi3: float


def planar_integrals(sys: PlanarSystem) -> PlanarIntegrals:
    polar = polar_decompose(sys)
    return PlanarIntegrals(
        chi2=piecewise_integral(polar.chi2),
        chi2_omega1=piecewise_integral(polar.chi2 * polar.Omega1),
        chi3=piecewise_integral(polar.chi3),
    )


def sigma_tilde_by_quadrature(q: NonsmoothQuadCoeffs) -> float:
    return 0.75 * planar_integrals(PlanarSystem(quad=q)).chi2


def sigma_2_by_quadrature(q: NonsmoothQuadCoeffs) -> float:
    return planar_integrals(PlanarSystem(quad=q)).chi2_omega1


def s_q_by_quadrature(s: SmoothCoeffs) -> float:
    smooth_only = SmoothCoeffs.from_lists(s.quadratic, [0.0] * 8)
    return -planar_integrals(PlanarSystem(smooth=smooth_only)).chi2_omega1 / QUARTER_PI


def s_c_by_quadrature(s: SmoothCoeffs) -> float:
    return planar_integrals(PlanarSystem(smooth=s)).chi3 / QUARTER_PI


def gamma23_by_quadrature(sys: PlanarSystem) -> Tuple[float, float]:
    """Gamma2 and Gamma3 from the defining single and nested integrals."""
    _require_normal_form(sys, "gamma23_by_quadrature")
    polar = polar_decompose(sys.with_mu(0.0))
    omega = sys.omega
    k2 = polar.chi2 / omega
    k3 = polar.chi3 / omega - polar.chi2 * polar.Omega1 / omega ** 2
    gamma2 = piecewise_integral(k2)
    gamma3 = 2.0 * nested_integral(k2, k2) + piecewise_integral(k3)
    return gamma2, gamma3
