"""
Shimmying-wheel model and its eigenstructure.

State (Omega, psi, q) with psi' = Omega and the tyre nonlinearity
c4 * q|q| acting on the first equation:

    J = [[c1, c2, c3],
         [ 1,  0,  0],
         [c5, c6, c7]]
"""

import math
from dataclasses import dataclass, fields, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..utils.exceptions import ModelError, NoComplexPairError, ResonantError
from ..utils.logging import get_logger

NEWTON_STEPS = 3


@dataclass(frozen=True)
class ShimmyParams:
    """The seven reduced constants c~1..c~7; c4 multiplies q|q|."""

    c1: float = 0.0
    c2: float = 0.0
    c3: float = 0.0
    c4: float = 0.0
    c5: float = 0.0
    c6: float = 0.0
    c7: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            value = float(getattr(self, f.name))
            if not math.isfinite(value):
                raise ModelError(f"{f.name} must be finite", details={f.name: value})
            object.__setattr__(self, f.name, value)

    @classmethod
    def from_list(cls, values: Sequence[float]) -> "ShimmyParams":
        if len(values) != 7:
            raise ModelError(f"Expected 7 shimmy constants, got {len(values)}")
        return cls(*values)

    def to_list(self) -> List[float]:
        return [getattr(self, f"c{i}") for i in range(1, 8)]

    @property
    def jacobian(self) -> np.ndarray:
        return np.array([
            [self.c1, self.c2, self.c3],
            [1.0, 0.0, 0.0],
            [self.c5, self.c6, self.c7],
        ])

    @property
    def char_poly(self) -> Tuple[float, float, float]:
        """(a, b, c) of lambda^3 + a lambda^2 + b lambda + c."""
        a = -(self.c1 + self.c7)
        b = self.c1 * self.c7 - self.c2 - self.c3 * self.c5
        c = self.c2 * self.c7 - self.c3 * self.c6
        return a, b, c

    def max_abs(self) -> float:
        return max(abs(x) for x in self.to_list())

    def with_c1(self, c1: float) -> "ShimmyParams":
        return replace(self, c1=c1)

    def negated_c4(self) -> "ShimmyParams":
        return replace(self, c4=-self.c4)

    def rhs(self, t: float, y: np.ndarray) -> np.ndarray:
        out = self.jacobian @ y[:3]
        out[0] += self.c4 * y[2] * abs(y[2])
        return out


@dataclass(frozen=True, eq=False)
class ShimmyEigen:
    """
    Eigenvalues mu +/- i omega (omega > 0) and lambda3 with eigenvectors.

    u + i v belongs to mu + i omega and is scaled to unit norm with its
    first nonzero component real and positive; s3 has unit length and a
    positive first nonzero component.
    """

    mu: float
    omega: float
    lambda3: float
    u: np.ndarray
    v: np.ndarray
    s3: np.ndarray
    residual: float = 0.0

    @property
    def transform(self) -> np.ndarray:
        return np.column_stack([self.u, self.v, self.s3])


def _poly(a: float, b: float, c: float, x):
    return ((x + a) * x + b) * x + c


def _dpoly(a: float, b: float, x):
    return (3.0 * x + 2.0 * a) * x + b


def _polish(a: float, b: float, c: float, x):
    for _ in range(NEWTON_STEPS):
        d = _dpoly(a, b, x)
        if d == 0:
            break
        x = x - _poly(a, b, c, x) / d
    return x


def discriminant(a: float, b: float, c: float) -> float:
    """Negative iff the monic cubic has one real root and a complex pair."""
    return 18.0 * a * b * c - 4.0 * a ** 3 * c + a * a * b * b - 4.0 * b ** 3 - 27.0 * c * c


def cubic_roots(a: float, b: float, c: float) -> Tuple[float, complex]:
    """
    Real root and the upper complex root of lambda^3 + a lambda^2 + b lambda + c.

    Cardano on the depressed cubic, deflation for the pair, then Newton
    polishing of both on the original polynomial.
    """
    if discriminant(a, b, c) >= 0.0:
        raise NoComplexPairError(
            "Characteristic polynomial has only real roots",
            details={"coefficients": [a, b, c], "discriminant": discriminant(a, b, c)},
        )
    p = b - a * a / 3.0
    q = 2.0 * a ** 3 / 27.0 - a * b / 3.0 + c
    root = math.sqrt(max(0.0, (q / 2.0) ** 2 + (p / 3.0) ** 3))
    t = float(np.cbrt(-q / 2.0 + root) + np.cbrt(-q / 2.0 - root))
    lam3 = float(_polish(a, b, c, t - a / 3.0))
    beta = a + lam3
    gamma = b + lam3 * beta
    half_width = gamma - beta * beta / 4.0
    pair = complex(-beta / 2.0, math.sqrt(max(0.0, half_width)))
    return lam3, complex(_polish(a, b, c, pair))


def _null_vector(m: np.ndarray) -> np.ndarray:
    """Kernel of a rank-2 3x3 matrix from the row pair with the largest cross product."""
    best = None
    for i, j in ((0, 1), (0, 2), (1, 2)):
        cand = np.cross(m[i], m[j])
        if best is None or np.linalg.norm(cand) > np.linalg.norm(best):
            best = cand
    return best


def _first_nonzero(x: np.ndarray, tol: float = 1e-14):
    scale = np.max(np.abs(x))
    for value in x:
        if abs(value) > tol * scale:
            return value
    return x[0]


def eigensplit(p: ShimmyParams, omega_tol: float = 1e-9) -> ShimmyEigen:
    """
    Eigenvalues and normalized eigenvectors of the Jacobian.

    Raises NoComplexPairError without a complex pair and ResonantError when
    omega or lambda3 vanishes.
    """
    a, b, c = p.char_poly
    lam3, lam = cubic_roots(a, b, c)
    scale = max(1.0, p.max_abs())
    if abs(lam.imag) < omega_tol * scale:
        raise ResonantError("Complex pair has vanishing frequency", details={"omega": lam.imag})
    if abs(lam3) < omega_tol * scale:
        raise ResonantError("Real eigenvalue vanishes", details={"lambda3": lam3})

    j = p.jacobian
    s1 = _null_vector(j.astype(complex) - lam * np.eye(3))
    s1 = s1 / np.linalg.norm(s1)
    lead = _first_nonzero(s1)
    s1 = s1 * (abs(lead) / lead)
    s3 = _null_vector(j - lam3 * np.eye(3)).real
    s3 = s3 / np.linalg.norm(s3)
    if _first_nonzero(s3) < 0.0:
        s3 = -s3

    residual = max(abs(_poly(a, b, c, lam3)), abs(_poly(a, b, c, lam)))
    eigen = ShimmyEigen(
        mu=float(lam.real), omega=float(lam.imag), lambda3=lam3,
        u=s1.real.copy(), v=s1.imag.copy(), s3=s3, residual=float(residual),
    )
    get_logger().debug(
        f"Shimmy eigenvalues: {eigen.mu:.6g} +/- {eigen.omega:.6g}i, {eigen.lambda3:.6g} (residual {residual:.1e})"
    )
    return eigen


def hopf_tuned_params(
    rng: np.random.Generator,
    omega: Optional[float] = None,
    lambda3: Optional[float] = None,
) -> ShimmyParams:
    """
    Random constants whose Jacobian has eigenvalues +/- i omega and lambda3 < 0.

    c3, c4, c5, c7 are drawn; c1, c2, c6 follow from matching the
    characteristic polynomial (lambda^2 + omega^2)(lambda - lambda3).
    """
    omega = rng.uniform(0.5, 2.0) if omega is None else omega
    lambda3 = rng.uniform(-2.0, -0.5) if lambda3 is None else lambda3
    c3 = rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 2.0)
    c4 = rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 2.0)
    c5 = rng.uniform(-2.0, 2.0)
    c7 = rng.uniform(-2.0, 2.0)
    c1 = lambda3 - c7
    c2 = c1 * c7 - c3 * c5 - omega ** 2
    c6 = (c2 * c7 + lambda3 * omega ** 2) / c3
    return ShimmyParams(c1=c1, c2=c2, c3=c3, c4=c4, c5=c5, c6=c6, c7=c7)
