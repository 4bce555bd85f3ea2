"""
Coefficients for a general (non-normal-form) planar linear part.

The normal-form transformation T = [p | -q] is built from the eigenvector
p + iq of the eigenvalue mu + i*omega (omega > 0). Writing the rows of T as
C(cos phi_hat, sin phi_hat) and D(cos theta_hat, sin theta_hat) gives the
closed form of Sigma in terms of the original modulus coefficients.
"""

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from ..averaging.quadrature import piecewise_average
from ..core.polar import polar_decompose, transformed_polar
from ..core.types import NonsmoothQuadCoeffs, PlanarSystem
from ..utils.exceptions import DegenerateTransformationError, NotHopfCompatibleError


def _radicand(m: np.ndarray) -> float:
    (m1, m2), (m3, m4) = m
    return -4.0 * m2 * m3 - (m1 - m4) ** 2


def _as_matrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.shape != (2, 2):
        raise NotHopfCompatibleError(f"Linear part must be 2x2, got shape {m.shape}")
    rad = _radicand(m)
    if rad <= 0.0:
        raise NotHopfCompatibleError(
            "Linear part is not Hopf-compatible (no complex eigenvalue pair)",
            details={"radicand": rad, "linear": m.tolist()},
        )
    return m


def lambda_general(m) -> float:
    """Averaged linear coefficient (m1 + m4) / sqrt(-4 m2 m3 - (m1 - m4)^2)."""
    m = _as_matrix(m)
    return float((m[0, 0] + m[1, 1]) / math.sqrt(_radicand(m)))


def lambda_by_quadrature(m) -> float:
    m = _as_matrix(m)
    polar = polar_decompose(PlanarSystem(linear=(tuple(m[0]), tuple(m[1]))))
    return piecewise_average(polar.M / polar.W)


def normal_form_transform(m) -> Tuple[np.ndarray, float, float]:
    """
    Return (T, mu, omega) with T^-1 m T = [[mu, -omega], [omega, mu]], omega > 0.

    The eigenvector is scaled to |e|^2 = 2 with its first nonzero component
    real and positive, which makes T the identity for a normal-form m.
    """
    m = _as_matrix(m)
    mu = 0.5 * float(np.trace(m))
    omega = 0.5 * math.sqrt(_radicand(m))
    eigvals, eigvecs = np.linalg.eig(m)
    idx = int(np.argmax(eigvals.imag))
    e = eigvecs[:, idx]
    pivot = e[0] if abs(e[0]) > 1e-12 * np.linalg.norm(e) else e[1]
    e = e * (abs(pivot) / pivot)
    e = e * (math.sqrt(2.0) / np.linalg.norm(e))
    t = np.column_stack([e.real, -e.imag])
    return t, mu, omega


@dataclass(frozen=True)
class TransformGeometry:
    """Row decomposition of a normal-form transformation."""

    C: float
    D: float
    phi_hat: float
    theta_hat: float
    det: float

    @classmethod
    def from_transform(cls, t: np.ndarray) -> "TransformGeometry":
        t = np.asarray(t, dtype=float)
        det = float(np.linalg.det(t))
        if abs(det) < 1e-14 * max(1.0, float(np.max(np.abs(t)))) ** 2:
            raise DegenerateTransformationError("det T = 0", details={"transform": t.tolist()})
        return cls(
            C=float(np.hypot(*t[0])), D=float(np.hypot(*t[1])),
            phi_hat=float(math.atan2(t[0, 1], t[0, 0])),
            theta_hat=float(math.atan2(t[1, 1], t[1, 0])),
            det=det,
        )


@dataclass(frozen=True)
class SigmaResult:
    """Sigma (or Sigma-tilde) with its quadrature values."""

    closed_form: float
    quadrature: float
    geometry: TransformGeometry
    omega: float
    general_slopes: bool
    original_coordinates: Optional[float] = None
    transform: np.ndarray = field(default=None, compare=False, repr=False)

    @property
    def abs_diff(self) -> float:
        return abs(self.closed_form - self.quadrature)

    @property
    def lyapunov_carrier(self) -> float:
        """(3 pi omega / 2) * Sigma, the replacement of sigma_tilde."""
        return 1.5 * math.pi * self.omega * self.closed_form


def sigma_closed_form(q: NonsmoothQuadCoeffs, geometry: TransformGeometry, omega: float) -> float:
    """
    Sigma-tilde closed form; every coefficient carries half its slope jump,
    so for slopes (-1, +1) this is the plain Sigma.
    """
    g = geometry
    sgn_c = math.copysign(1.0, g.C)
    sgn_d = math.copysign(1.0, g.D)
    half = lambda pair: 0.5 * pair.jump  # noqa: E731
    al, be = q.alpha, q.beta
    bracket = (2.0 * abs(g.C) * q.a11 * half(al[0]) + abs(g.D) * q.a12 * half(al[1])
               + abs(g.C) * q.b21 * half(be[2]) + 2.0 * abs(g.D) * q.b22 * half(be[3])
               + math.cos(g.theta_hat - g.phi_hat)
               * (sgn_c * g.D * q.a21 * half(al[2]) + sgn_d * g.C * q.b12 * half(be[1])))
    return 2.0 * bracket / (3.0 * math.pi * omega)


def sigma_general_from_transform(t, omega: float, q: NonsmoothQuadCoeffs) -> SigmaResult:
    """Sigma for an explicitly given transformation T (x = T xi) and frequency omega."""
    t = np.asarray(t, dtype=float)
    geometry = TransformGeometry.from_transform(t)
    sys = PlanarSystem(omega=omega, quad=q)
    polar = transformed_polar(sys, t)
    quadrature = piecewise_average(polar.chi2) / omega
    return SigmaResult(
        closed_form=sigma_closed_form(q, geometry, omega),
        quadrature=quadrature,
        geometry=geometry,
        omega=omega,
        general_slopes=not q.all_abs,
        transform=t,
    )


def sigma_general(m, q: NonsmoothQuadCoeffs) -> SigmaResult:
    """
    Sigma (slopes (-1, +1)) or Sigma-tilde (general slopes) for linear part m.

    The result also carries the average (1/2pi) * integral of
    chi2/W - M Omega1/W^2 in the original coordinates at zero trace. That
    value is not coordinate-invariant and is reported for reference only.
    """
    m = _as_matrix(m)
    t, _, omega = normal_form_transform(m)
    result = sigma_general_from_transform(t, omega, q)
    shifted = m - 0.5 * float(np.trace(m)) * np.eye(2)
    original = polar_decompose(PlanarSystem(linear=(tuple(shifted[0]), tuple(shifted[1])), quad=q))
    average = piecewise_average(
        original.chi2 / original.W - original.M * original.Omega1 / (original.W * original.W)
    )
    return SigmaResult(
        closed_form=result.closed_form,
        quadrature=result.quadrature,
        geometry=result.geometry,
        omega=omega,
        general_slopes=result.general_slopes,
        original_coordinates=average,
        transform=t,
    )
