"""
Domain types for planar, 3D and nD systems with second-order modulus terms.

All types are frozen dataclasses; array-valued fields are stored as read-only
numpy arrays so instances can be shared between threads.
"""

import math
from dataclasses import dataclass, field, fields, replace
from typing import Optional, Sequence, Tuple

import numpy as np

from ..utils.exceptions import ModelError, NotHopfCompatibleError


@dataclass(frozen=True)
class SlopePair:
    """Left/right slopes of the generalized absolute value."""

    p_minus: float = -1.0
    p_plus: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "p_minus", float(self.p_minus))
        object.__setattr__(self, "p_plus", float(self.p_plus))
        if not (math.isfinite(self.p_minus) and math.isfinite(self.p_plus)):
            raise ModelError(
                "Slopes must be finite",
                details={"p_minus": self.p_minus, "p_plus": self.p_plus},
            )

    @property
    def is_abs(self) -> bool:
        """True for the pair (-1, +1), i.e. the ordinary absolute value."""
        return self.p_minus == -1.0 and self.p_plus == 1.0

    @property
    def jump(self) -> float:
        """Slope jump p_plus - p_minus across zero."""
        return self.p_plus - self.p_minus

    @property
    def lipschitz(self) -> float:
        return max(abs(self.p_minus), abs(self.p_plus))

    def to_list(self) -> list:
        return [self.p_minus, self.p_plus]


ABS = SlopePair()
_ABS4 = (ABS, ABS, ABS, ABS)


def _slopes(values: Optional[Sequence]) -> Tuple[SlopePair, ...]:
    if values is None:
        return _ABS4
    pairs = tuple(v if isinstance(v, SlopePair) else SlopePair(*v) for v in values)
    if len(pairs) != 4:
        raise ModelError(f"Expected 4 slope pairs, got {len(pairs)}")
    return pairs


def _finite(owner: object) -> None:
    for f in fields(owner):
        value = getattr(owner, f.name)
        if isinstance(value, float) and not math.isfinite(value):
            raise ModelError(f"{type(owner).__name__}.{f.name} must be finite, got {value}")


@dataclass(frozen=True)
class NonsmoothQuadCoeffs:
    """
    Coefficients of the second-order modulus terms of the planar block.

    f = a11 v[v]_a1 + a12 v[w]_a2 + a21 w[v]_a3 + a22 w[w]_a4
    g = b11 v[v]_b1 + b12 v[w]_b2 + b21 w[v]_b3 + b22 w[w]_b4

    The first index selects the multiplying variable, the second the
    argument of the generalized absolute value.
    """

    a11: float = 0.0
    a12: float = 0.0
    a21: float = 0.0
    a22: float = 0.0
    b11: float = 0.0
    b12: float = 0.0
    b21: float = 0.0
    b22: float = 0.0
    alpha: Tuple[SlopePair, ...] = _ABS4
    beta: Tuple[SlopePair, ...] = _ABS4

    def __post_init__(self):
        for name in ("a11", "a12", "a21", "a22", "b11", "b12", "b21", "b22"):
            object.__setattr__(self, name, float(getattr(self, name)))
        object.__setattr__(self, "alpha", _slopes(self.alpha))
        object.__setattr__(self, "beta", _slopes(self.beta))
        _finite(self)

    @classmethod
    def from_matrices(
        cls,
        a: Sequence[Sequence[float]],
        b: Sequence[Sequence[float]],
        slopes: Optional[Sequence] = None,
    ) -> "NonsmoothQuadCoeffs":
        """Build from 2x2 blocks and eight slope pairs (alpha1..4 then beta1..4)."""
        pairs = list(slopes) if slopes is not None else [ABS] * 8
        if len(pairs) != 8:
            raise ModelError(f"Expected 8 slope pairs, got {len(pairs)}")
        return cls(
            a11=a[0][0], a12=a[0][1], a21=a[1][0], a22=a[1][1],
            b11=b[0][0], b12=b[0][1], b21=b[1][0], b22=b[1][1],
            alpha=tuple(pairs[:4]), beta=tuple(pairs[4:]),
        )

    @property
    def a(self) -> np.ndarray:
        return np.array([[self.a11, self.a12], [self.a21, self.a22]])

    @property
    def b(self) -> np.ndarray:
        return np.array([[self.b11, self.b12], [self.b21, self.b22]])

    @property
    def slopes(self) -> Tuple[SlopePair, ...]:
        return tuple(self.alpha) + tuple(self.beta)

    @property
    def all_abs(self) -> bool:
        return all(p.is_abs for p in self.slopes)

    @property
    def is_zero(self) -> bool:
        return not np.any(self.a) and not np.any(self.b)

    def max_abs(self) -> float:
        return float(max(np.max(np.abs(self.a)), np.max(np.abs(self.b))))

    def scaled(self, factor: float) -> "NonsmoothQuadCoeffs":
        """Multiply every coefficient (not the slopes) by ``factor``."""
        return replace(
            self,
            **{n: factor * getattr(self, n)
               for n in ("a11", "a12", "a21", "a22", "b11", "b12", "b21", "b22")},
        )


@dataclass(frozen=True)
class SmoothCoeffs:
    """
    Smooth quadratic and cubic terms of the planar block.

    f_q = a1 v^2 + a2 v w + a3 w^2,  g_q = b1 v^2 + b2 v w + b3 w^2
    f_c = ca1 v^3 + ca2 v w^2 + ca3 v^2 w + ca4 w^3, g_c likewise with cb
    """

    a1: float = 0.0
    a2: float = 0.0
    a3: float = 0.0
    b1: float = 0.0
    b2: float = 0.0
    b3: float = 0.0
    ca1: float = 0.0
    ca2: float = 0.0
    ca3: float = 0.0
    ca4: float = 0.0
    cb1: float = 0.0
    cb2: float = 0.0
    cb3: float = 0.0
    cb4: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, float(getattr(self, f.name)))
        _finite(self)

    @classmethod
    def from_lists(cls, quadratic: Sequence[float], cubic: Sequence[float]) -> "SmoothCoeffs":
        if len(quadratic) != 6 or len(cubic) != 8:
            raise ModelError("Smooth coefficients need 6 quadratic and 8 cubic values")
        names = [f.name for f in fields(cls)]
        return cls(**dict(zip(names, list(quadratic) + list(cubic))))

    @property
    def quadratic(self) -> Tuple[float, ...]:
        return (self.a1, self.a2, self.a3, self.b1, self.b2, self.b3)

    @property
    def cubic(self) -> Tuple[float, ...]:
        return (self.ca1, self.ca2, self.ca3, self.ca4, self.cb1, self.cb2, self.cb3, self.cb4)

    @property
    def is_zero(self) -> bool:
        return not any(self.quadratic) and not any(self.cubic)


@dataclass(frozen=True)
class PlanarSystem:
    """
    Planar system with linear part, modulus terms and smooth terms.

    With ``linear`` unset the linear part is the normal form
    (mu, -omega; omega, mu). With a general 2x2 ``linear`` matrix, ``mu`` and
    ``omega`` are derived: mu = trace/2, omega = sqrt(det - mu^2) > 0.
    """

    mu: float = 0.0
    omega: float = 1.0
    quad: NonsmoothQuadCoeffs = field(default_factory=NonsmoothQuadCoeffs)
    smooth: SmoothCoeffs = field(default_factory=SmoothCoeffs)
    linear: Optional[Tuple[Tuple[float, float], Tuple[float, float]]] = None

    def __post_init__(self):
        if self.linear is not None:
            m = np.asarray(self.linear, dtype=float)
            if m.shape != (2, 2) or not np.all(np.isfinite(m)):
                raise ModelError("Linear part must be a finite 2x2 matrix")
            (m1, m2), (m3, m4) = m
            radicand = -4.0 * m2 * m3 - (m1 - m4) ** 2
            if radicand <= 0.0:
                raise NotHopfCompatibleError(
                    "Linear part has no complex eigenvalue pair",
                    details={"radicand": radicand, "linear": m.tolist()},
                )
            object.__setattr__(self, "linear", (tuple(map(float, m[0])), tuple(map(float, m[1]))))
            object.__setattr__(self, "mu", 0.5 * (m1 + m4))
            object.__setattr__(self, "omega", 0.5 * math.sqrt(radicand))
        else:
            object.__setattr__(self, "mu", float(self.mu))
            object.__setattr__(self, "omega", float(self.omega))
            if not math.isfinite(self.mu) or not math.isfinite(self.omega):
                raise ModelError("mu and omega must be finite")
            if self.omega == 0.0:
                raise NotHopfCompatibleError("omega must be nonzero")

    @property
    def is_normal_form(self) -> bool:
        return self.linear is None

    @property
    def matrix(self) -> np.ndarray:
        if self.linear is None:
            return np.array([[self.mu, -self.omega], [self.omega, self.mu]])
        return np.array(self.linear)

    @property
    def orientation(self) -> float:
        """+1 for counter-clockwise rotation of the linear flow, -1 otherwise."""
        if self.linear is None:
            return math.copysign(1.0, self.omega)
        return math.copysign(1.0, self.linear[1][0])

    @property
    def is_nonsmooth_zero(self) -> bool:
        return self.quad.is_zero

    def with_mu(self, mu: float) -> "PlanarSystem":
        """Same system with the real part of the critical pair set to ``mu``."""
        if self.linear is None:
            return replace(self, mu=mu)
        shift = mu - self.mu
        m = self.matrix + shift * np.eye(2)
        return replace(self, linear=(tuple(m[0]), tuple(m[1])))

    def nonlinear_scale(self) -> float:
        """Infinity norm of all nonlinear coefficients."""
        smooth = max((abs(x) for x in self.smooth.quadratic + self.smooth.cubic), default=0.0)
        return max(self.quad.max_abs(), smooth)


def _frozen_array(values, shape: Tuple[int, ...], name: str) -> np.ndarray:
    arr = np.array(values, dtype=float).reshape(shape) if np.size(values) else np.zeros(shape)
    if arr.shape != shape:
        raise ModelError(f"{name} must have shape {shape}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ModelError(f"{name} must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SystemND:
    """
    System with k transverse variables u and a normal-form planar block.

    u' = A u + Quu(u,u) + (Quv u) v + (Quw u) w + q_vw v w + sum_i h_i-modulus terms
    v' = mu v - omega w + (c6.u) v + (c7.u) w + f
    w' = omega v + mu w + (c8.u) v + (c9.u) w + g
    """

    planar: PlanarSystem
    transverse: np.ndarray
    c6: np.ndarray = None
    c7: np.ndarray = None
    c8: np.ndarray = None
    c9: np.ndarray = None
    uu: np.ndarray = None
    uv: np.ndarray = None
    uw: np.ndarray = None
    vw: np.ndarray = None
    h: np.ndarray = None
    h_slopes: Tuple[Tuple[SlopePair, ...], ...] = None

    def __post_init__(self):
        if not self.planar.is_normal_form:
            raise ModelError("Transverse systems require a normal-form planar block")
        a = np.atleast_2d(np.asarray(self.transverse, dtype=float))
        k = a.shape[0]
        if a.shape != (k, k):
            raise ModelError(f"Transverse matrix must be square, got {a.shape}")
        object.__setattr__(self, "transverse", _frozen_array(a, (k, k), "transverse"))
        for name in ("c6", "c7", "c8", "c9", "vw"):
            value = getattr(self, name)
            object.__setattr__(self, name, _frozen_array(value if value is not None else [], (k,), name))
        object.__setattr__(self, "uu", _frozen_array(self.uu if self.uu is not None else [], (k, k, k), "uu"))
        for name in ("uv", "uw"):
            value = getattr(self, name)
            object.__setattr__(self, name, _frozen_array(value if value is not None else [], (k, k), name))
        object.__setattr__(self, "h", _frozen_array(self.h if self.h is not None else [], (k, 2, 2), "h"))
        slopes = self.h_slopes if self.h_slopes is not None else [None] * k
        if len(slopes) != k:
            raise ModelError(f"Expected {k} groups of h slopes, got {len(slopes)}")
        object.__setattr__(self, "h_slopes", tuple(_slopes(s) for s in slopes))

    @property
    def dim(self) -> int:
        """Number of transverse variables k (state dimension is k + 2)."""
        return int(self.transverse.shape[0])

    @property
    def mu(self) -> float:
        return self.planar.mu

    @property
    def omega(self) -> float:
        return self.planar.omega

    def with_mu(self, mu: float) -> "SystemND":
        return replace(self, planar=self.planar.with_mu(mu))


@dataclass(frozen=True)
class System3D:
    """
    Three-dimensional system with one transverse variable u.

    u' = c1 u + c2 u^2 + c3 u v + c4 u w + c5 v w
         + h11 v[v] + h12 v[w] + h21 w[v] + h22 w[w]
    v' = mu v - omega w + c6 u v + c7 u w + f
    w' = omega v + mu w + c8 u v + c9 u w + g
    """

    planar: PlanarSystem = field(default_factory=PlanarSystem)
    c1: float = 0.0
    c2: float = 0.0
    c3: float = 0.0
    c4: float = 0.0
    c5: float = 0.0
    c6: float = 0.0
    c7: float = 0.0
    c8: float = 0.0
    c9: float = 0.0
    h11: float = 0.0
    h12: float = 0.0
    h21: float = 0.0
    h22: float = 0.0
    h_slopes: Tuple[SlopePair, ...] = _ABS4

    def __post_init__(self):
        if not self.planar.is_normal_form:
            raise ModelError("System3D requires a normal-form planar block")
        for f in fields(self):
            if f.name not in ("planar", "h_slopes"):
                object.__setattr__(self, f.name, float(getattr(self, f.name)))
        object.__setattr__(self, "h_slopes", _slopes(self.h_slopes))
        _finite(self)

    @classmethod
    def from_lists(
        cls,
        planar: PlanarSystem,
        c: Sequence[float],
        h: Sequence[Sequence[float]] = ((0.0, 0.0), (0.0, 0.0)),
        h_slopes: Optional[Sequence] = None,
    ) -> "System3D":
        if len(c) != 9:
            raise ModelError(f"Expected 9 c-coefficients, got {len(c)}")
        kwargs = {f"c{i + 1}": value for i, value in enumerate(c)}
        return cls(
            planar=planar, h11=h[0][0], h12=h[0][1], h21=h[1][0], h22=h[1][1],
            h_slopes=h_slopes, **kwargs,
        )

    @property
    def mu(self) -> float:
        return self.planar.mu

    @property
    def omega(self) -> float:
        return self.planar.omega

    @property
    def c(self) -> Tuple[float, ...]:
        return tuple(getattr(self, f"c{i}") for i in range(1, 10))

    @property
    def h(self) -> np.ndarray:
        return np.array([[self.h11, self.h12], [self.h21, self.h22]])

    @property
    def h_is_zero(self) -> bool:
        return not np.any(self.h)

    def with_mu(self, mu: float) -> "System3D":
        return replace(self, planar=self.planar.with_mu(mu))

    def to_nd(self) -> SystemND:
        """Embed as a SystemND with k = 1."""
        return SystemND(
            planar=self.planar,
            transverse=[[self.c1]],
            c6=[self.c6], c7=[self.c7], c8=[self.c8], c9=[self.c9],
            uu=[[[self.c2]]], uv=[[self.c3]], uw=[[self.c4]], vw=[self.c5],
            h=[self.h.tolist()], h_slopes=(self.h_slopes,),
        )
