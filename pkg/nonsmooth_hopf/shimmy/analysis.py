"""
Normal-form transformation and criticality of the shimmying wheel.

With T = (u | v | s3) the linear part becomes A = [[mu, omega], [-omega, mu]]
plus lambda3, and the nonlinearity is (T1, T2, T3) [[u3 xi1 + v3 xi2 + s3 xi3]]
with [[x]] = x|x|. A rotation by theta about the xi3 axis removes xi2 from
the modulus argument, leaving d (v cos theta ... ) as its planar part. The
averaged quadratic coefficient of the radial equation is then

    int chi2 = (8/3) d|d| (T1 cos theta + T2 sin theta)

and decides the direction of bifurcation.
"""

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np

from ..utils.config import Config, get_config
from ..utils.exceptions import SingularTransformError
from ..utils.logging import get_logger
from .model import ShimmyEigen, ShimmyParams, eigensplit

# integral of cos^2 |cos| over one period
CHI2_WEIGHT = 8.0 / 3.0


class ShimmyVerdict(str, Enum):
    VERTICAL = "vertical"
    SUPERCRITICAL = "supercritical"
    SUBCRITICAL = "subcritical"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class PotentialCertificate:
    """
    Potential P(v) = omega^2 v^2 / 2 + k v^2 |v| / 3 of the s3 = 0 reduction at mu = 0.

    Convex for k >= 0; otherwise saddles at |v| = omega^2 / |k| bound the
    family of orbits by a barrier of height omega^2 v*^2 / 6.
    """

    omega: float
    b11: float
    cubic: float

    @property
    def convex(self) -> bool:
        return self.cubic >= 0.0

    @property
    def saddle(self) -> Optional[float]:
        return None if self.convex else self.omega ** 2 / abs(self.cubic)

    @property
    def barrier(self) -> Optional[float]:
        v = self.saddle
        return None if v is None else self.omega ** 2 * v * v / 6.0

    def potential(self, v):
        v = np.asarray(v, dtype=float)
        return self.omega ** 2 * v * v / 2.0 + self.cubic * v * v * np.abs(v) / 3.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "omega": self.omega,
            "b11": self.b11,
            "convex": self.convex,
            "saddle": self.saddle,
            "barrier": self.barrier,
        }


@dataclass(frozen=True, eq=False)
class ShimmyAnalysis:
    """Everything the criticality decision depends on."""

    params: ShimmyParams
    eigen: ShimmyEigen
    det_t: float
    t_tilde: np.ndarray
    theta: float
    d_tilde: float
    s3_third: float
    h31: float
    h32: float
    integral_chi2: float
    certificate: Optional[PotentialCertificate] = None
    verdict: Optional[ShimmyVerdict] = None

    @property
    def transform(self) -> np.ndarray:
        return self.eigen.transform

    @property
    def w_coefficient(self) -> float:
        """Coefficient of w in the rotated modulus argument; zero by the choice of theta."""
        u3, v3 = self.eigen.u[2], self.eigen.v[2]
        return v3 * math.cos(self.theta) - u3 * math.sin(self.theta)

    @property
    def branch_slope(self) -> Optional[float]:
        """dr0/dmu = -2 pi / int chi2 for a transversal branch."""
        if self.verdict not in (ShimmyVerdict.SUPERCRITICAL, ShimmyVerdict.SUBCRITICAL):
            return None
        return -2.0 * math.pi / self.integral_chi2

    def block_form(self) -> np.ndarray:
        """T^-1 J T, which should equal diag(A, lambda3)."""
        t = self.transform
        return np.linalg.solve(t, self.params.jacobian @ t)

    def to_dict(self) -> Dict[str, Any]:
        e = self.eigen
        return {
            "params": self.params.to_list(),
            "eigen": {
                "mu": e.mu,
                "omega": e.omega,
                "lambda3": e.lambda3,
                "u": e.u.tolist(),
                "v": e.v.tolist(),
                "s3": e.s3.tolist(),
                "residual": e.residual,
            },
            "det_T": self.det_t,
            "T_tilde": self.t_tilde.tolist(),
            "theta": self.theta,
            "d_tilde": self.d_tilde,
            "s3_third": self.s3_third,
            "h31": self.h31,
            "h32": self.h32,
            "integral_chi2": self.integral_chi2,
            "verdict": None if self.verdict is None else self.verdict.value,
            "branch_slope": self.branch_slope,
            "certificate": None if self.certificate is None else self.certificate.to_dict(),
        }


def normalize(p: ShimmyParams, eigen: Optional[ShimmyEigen] = None, det_tol: float = 1e-12) -> ShimmyAnalysis:
    """
    Transform to block form, rotate the modulus argument and evaluate int chi2.

    Raises SingularTransformError when the eigenvectors are (nearly) dependent.
    """
    eigen = eigen or eigensplit(p)
    u, v, s = eigen.u, eigen.v, eigen.s3
    t = eigen.transform
    det = float(np.linalg.det(t))
    if abs(det) < det_tol * np.prod(np.linalg.norm(t, axis=0)):
        raise SingularTransformError("Eigenvector matrix T is singular", details={"det_T": det})

    t_tilde = p.c4 * np.array([
        v[1] * s[2] - v[2] * s[1],
        s[1] * u[2] - s[2] * u[1],
        u[1] * v[2] - u[2] * v[1],
    ]) / det

    u3, v3 = u[2], v[2]
    theta = math.atan(v3 / u3) if u3 != 0.0 else 0.5 * math.pi
    c, sn = math.cos(theta), math.sin(theta)
    d = u3 * c + v3 * sn
    h31 = t_tilde[0] * c + t_tilde[1] * sn
    h32 = -t_tilde[0] * sn + t_tilde[1] * c
    integral = CHI2_WEIGHT * d * abs(d) * h31

    certificate = None
    if s[2] == 0.0 or abs(s[2]) < 1e-12:
        b11 = h32 * d * abs(d)
        # w' = -omega v + b11 v|v| and v' = omega w at mu = 0
        certificate = PotentialCertificate(omega=eigen.omega, b11=b11, cubic=-eigen.omega * b11)

    return ShimmyAnalysis(
        params=p, eigen=eigen, det_t=det, t_tilde=t_tilde, theta=theta, d_tilde=d,
        s3_third=float(s[2]), h31=h31, h32=h32, integral_chi2=integral, certificate=certificate,
    )


def classify_shimmy(a: ShimmyAnalysis, config: Optional[Config] = None) -> ShimmyVerdict:
    """
    Vertical iff d s3 c4 vanishes; otherwise supercritical iff int chi2 < 0.

    A vanishing int chi2 with nonzero d s3 c4 is reported as degenerate.
    """
    config = config or get_config()
    scale = a.params.max_abs()
    carrier = a.d_tilde * a.s3_third * a.params.c4
    if abs(carrier) < config.tolerances.vertical * scale ** 3 or carrier == 0.0:
        return ShimmyVerdict.VERTICAL
    if abs(a.integral_chi2) < config.tolerances.degeneracy * max(1.0, abs(a.params.c4)):
        return ShimmyVerdict.DEGENERATE
    return ShimmyVerdict.SUPERCRITICAL if a.integral_chi2 < 0.0 else ShimmyVerdict.SUBCRITICAL


def analyze_shimmy(p: ShimmyParams, config: Optional[Config] = None) -> ShimmyAnalysis:
    """eigensplit, normalize and classify in one pass."""
    analysis = normalize(p)
    analysis = replace(analysis, verdict=classify_shimmy(analysis, config))
    get_logger().debug(
        f"Shimmy: d={analysis.d_tilde:.4g}, s3={analysis.s3_third:.4g}, det T={analysis.det_t:.4g},"
        f" int chi2={analysis.integral_chi2:.4g} -> {analysis.verdict.value}"
    )
    return analysis
