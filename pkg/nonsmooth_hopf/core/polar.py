"""
Polar decomposition of planar, 3D and nD systems.

With v = r cos(phi), w = r sin(phi) the planar block becomes

    r'   = r (M + chi1.u) + r^2 chi2 + r^3 chi3
    phi' = W + Omega0.u + r Omega1 + r^2 Omega2

and the transverse equation u' = A u + Quu(u,u) + r K(phi) u + r^2 Upsilon(phi).
The angle functions are smooth between the switching angles, which are
known in closed form: the axes for coordinate switching lines and
zeta +- pi/2 for rotated factors cos(phi - zeta).
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np

from ..utils.exceptions import AngularSpeedError, DegenerateTransformationError
from .genabs import gen_abs
from .rhs import quadratic_terms, smooth_cubic_terms, upsilon_terms
from .types import PlanarSystem, System3D, SystemND

TWO_PI = 2.0 * math.pi
AXIS_ANGLES: Tuple[float, ...] = (0.0, 0.5 * math.pi, math.pi, 1.5 * math.pi)


def normalize_angles(angles: Sequence[float], tol: float = 1e-13) -> Tuple[float, ...]:
    """Reduce angles to [0, 2pi), sort them and drop near-duplicates."""
    reduced = sorted(float(np.mod(a, TWO_PI)) for a in angles)
    reduced = [0.0 if TWO_PI - a < tol else a for a in reduced]
    out: list = []
    for a in sorted(reduced):
        if not out or a - out[-1] > tol:
            out.append(a)
    return tuple(out)


def rotated_kinks(zetas: Sequence[float]) -> Tuple[float, ...]:
    """Zeros of cos(phi - zeta) for every zeta."""
    return normalize_angles([z + sgn * 0.5 * math.pi for z in zetas for sgn in (-1.0, 1.0)])


@dataclass(frozen=True)
class AngleFunction:
    """
    A vectorized function of the polar angle with its non-smooth points.

    Arithmetic between AngleFunctions merges kink lists, so products such as
    chi2 * Omega1 keep the subdivision needed by the quadrature.
    """

    func: Callable[[np.ndarray], np.ndarray]
    kinks: Tuple[float, ...] = ()
    smooth: bool = True
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "kinks", normalize_angles(self.kinks))

    @classmethod
    def constant(cls, value: float, name: str = "") -> "AngleFunction":
        return cls(lambda phi: np.full(np.shape(phi), float(value)), (), True, name)

    def __call__(self, phi: Union[float, np.ndarray]) -> np.ndarray:
        return self.func(np.asarray(phi, dtype=float))

    def _combine(self, other, op: Callable, symbol: str) -> "AngleFunction":
        if isinstance(other, AngleFunction):
            return AngleFunction(
                lambda phi, f=self.func, g=other.func: op(f(phi), g(phi)),
                self.kinks + other.kinks,
                self.smooth and other.smooth,
                f"({self.name}{symbol}{other.name})",
            )
        value = float(other)
        return AngleFunction(
            lambda phi, f=self.func: op(f(phi), value),
            self.kinks, self.smooth, f"({self.name}{symbol}{value:g})",
        )

    def __add__(self, other):
        return self._combine(other, np.add, "+")

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, np.subtract, "-")

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        return self._combine(other, np.multiply, "*")

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._combine(other, np.divide, "/")

    def __neg__(self):
        return AngleFunction(lambda phi, f=self.func: -f(phi), self.kinks, self.smooth, f"-{self.name}")

    def map(self, op: Callable[[np.ndarray, np.ndarray], np.ndarray], name: str = "") -> "AngleFunction":
        """Apply ``op(phi, values)`` pointwise, keeping the kinks."""
        return AngleFunction(lambda phi, f=self.func: op(phi, f(phi)), self.kinks, self.smooth, name)


@dataclass(frozen=True)
class PolarSamples:
    """Angle functions of a polar decomposition together with its switching angles."""

    switching_angles: Tuple[float, ...]
    chi2: AngleFunction
    chi3: AngleFunction
    Omega1: AngleFunction
    Omega2: AngleFunction
    M: AngleFunction
    W: AngleFunction
    mu: Optional[float] = None
    omega: Optional[float] = None
    chi1: Optional[AngleFunction] = None
    Omega0: Optional[AngleFunction] = None
    Upsilon: Optional[AngleFunction] = None
    coupling: Optional[AngleFunction] = None
    extras: dict = field(default_factory=dict)

    @property
    def is_normal_form(self) -> bool:
        return self.mu is not None


def _cs(phi: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    return np.cos(phi), np.sin(phi)


def _planar_functions(sys: PlanarSystem) -> dict:
    q, sm = sys.quad, sys.smooth
    al, be = q.alpha, q.beta

    def chi2(phi):
        c, s = _cs(phi)
        gc = lambda p: gen_abs(c, p)  # noqa: E731
        gs = lambda p: gen_abs(s, p)  # noqa: E731
        nonsmooth = (c * c * (q.a11 * gc(al[0]) + q.a12 * gs(al[1]))
                     + s * c * (q.a21 * gc(al[2]) + q.a22 * gs(al[3])
                                + q.b11 * gc(be[0]) + q.b12 * gs(be[1]))
                     + s * s * (q.b21 * gc(be[2]) + q.b22 * gs(be[3])))
        smooth = (sm.a1 * c ** 3 + (sm.a2 + sm.b1) * c * c * s
                  + (sm.a3 + sm.b2) * c * s * s + sm.b3 * s ** 3)
        return nonsmooth + smooth

    def omega1(phi):
        c, s = _cs(phi)
        gc = lambda p: gen_abs(c, p)  # noqa: E731
        gs = lambda p: gen_abs(s, p)  # noqa: E731
        nonsmooth = (c * c * (q.b11 * gc(be[0]) + q.b12 * gs(be[1]))
                     + s * c * (q.b21 * gc(be[2]) + q.b22 * gs(be[3])
                                - q.a11 * gc(al[0]) - q.a12 * gs(al[1]))
                     - s * s * (q.a21 * gc(al[2]) + q.a22 * gs(al[3])))
        smooth = (sm.b1 * c ** 3 + (sm.b2 - sm.a1) * c * c * s
                  + (sm.b3 - sm.a2) * c * s * s - sm.a3 * s ** 3)
        return nonsmooth + smooth

    def chi3(phi):
        c, s = _cs(phi)
        return (sm.ca1 * c ** 4 + (sm.ca3 + sm.cb1) * c ** 3 * s
                + (sm.ca2 + sm.cb3) * c * c * s * s + (sm.ca4 + sm.cb2) * c * s ** 3
                + sm.cb4 * s ** 4)

    def omega2(phi):
        c, s = _cs(phi)
        return (sm.cb1 * c ** 4 + (sm.cb3 - sm.ca1) * c ** 3 * s
                + (sm.cb2 - sm.ca3) * c * c * s * s + (sm.cb4 - sm.ca2) * c * s ** 3
                - sm.ca4 * s ** 4)

    kinks = AXIS_ANGLES
    out = {
        "chi2": AngleFunction(chi2, kinks, q.is_zero, "chi2"),
        "Omega1": AngleFunction(omega1, kinks, q.is_zero, "Omega1"),
        "chi3": AngleFunction(chi3, (), True, "chi3"),
        "Omega2": AngleFunction(omega2, (), True, "Omega2"),
    }

    if sys.is_normal_form:
        out["M"] = AngleFunction.constant(sys.mu, "M")
        out["W"] = AngleFunction.constant(sys.omega, "W")
    else:
        (m1, m2), (m3, m4) = sys.matrix
        if (m4 - m1) ** 2 + 4.0 * m2 * m3 >= 0.0:
            raise AngularSpeedError(
                "Angular speed W vanishes on [0, 2pi)", details={"linear": sys.matrix.tolist()}
            )

        def big_m(phi):
            c, s = _cs(phi)
            return m1 * c * c + (m2 + m3) * s * c + m4 * s * s

        def big_w(phi):
            c, s = _cs(phi)
            return m3 * c * c + (m4 - m1) * s * c - m2 * s * s

        out["M"] = AngleFunction(big_m, (), True, "M")
        out["W"] = AngleFunction(big_w, (), True, "W")
    return out


def _transverse_functions(sys: SystemND) -> dict:
    c6, c7, c8, c9 = (np.asarray(x)[:, None] for x in (sys.c6, sys.c7, sys.c8, sys.c9))
    uv, uw = sys.uv[..., None], sys.uw[..., None]
    h_nonzero = bool(np.any(sys.h))

    def chi1(phi):
        c, s = _cs(np.atleast_1d(phi))
        return c6 * c * c + (c7 + c8) * c * s + c9 * s * s

    def omega0(phi):
        c, s = _cs(np.atleast_1d(phi))
        return c8 * c * c + (c9 - c6) * c * s - c7 * s * s

    def upsilon(phi):
        c, s = _cs(np.atleast_1d(phi))
        return upsilon_terms(sys, c, s)

    def coupling(phi):
        c, s = _cs(np.atleast_1d(phi))
        return uv * c + uw * s

    return {
        "chi1": AngleFunction(chi1, (), True, "chi1"),
        "Omega0": AngleFunction(omega0, (), True, "Omega0"),
        "Upsilon": AngleFunction(upsilon, AXIS_ANGLES, not h_nonzero, "Upsilon"),
        "coupling": AngleFunction(coupling, (), True, "coupling"),
    }


def _squeeze_first(fn: AngleFunction) -> AngleFunction:
    return AngleFunction(lambda phi, f=fn.func: f(phi)[0].reshape(np.shape(phi)), fn.kinks, fn.smooth, fn.name)


def polar_decompose(sys: Union[PlanarSystem, System3D, SystemND]) -> PolarSamples:
    """
    Polar angle functions of a system.

    For System3D the transverse functions are scalar-valued; for SystemND they
    return arrays with the transverse index first.
    """
    planar = sys if isinstance(sys, PlanarSystem) else sys.planar
    funcs = _planar_functions(planar)
    if isinstance(sys, (System3D, SystemND)):
        nd = sys.to_nd() if isinstance(sys, System3D) else sys
        transverse = _transverse_functions(nd)
        if isinstance(sys, System3D):
            for key in ("chi1", "Omega0", "Upsilon"):
                transverse[key] = _squeeze_first(transverse[key])
            coupling = transverse["coupling"]
            transverse["coupling"] = AngleFunction(
                lambda phi, f=coupling.func: f(phi)[0, 0].reshape(np.shape(phi)),
                (), True, "coupling",
            )
        funcs.update(transverse)
    return PolarSamples(
        switching_angles=AXIS_ANGLES,
        mu=planar.mu if planar.is_normal_form else None,
        omega=planar.omega if planar.is_normal_form else None,
        **funcs,
    )


def transformed_polar(sys: PlanarSystem, transform: np.ndarray) -> PolarSamples:
    """
    Polar functions of the planar block in coordinates x = T xi.

    The nonlinearity becomes T^-1 F(T xi); its switching lines are the images
    of the axes, giving kinks at zeta_i +- pi/2 where zeta_i is the direction
    of the i-th row of T.
    """
    t = np.asarray(transform, dtype=float)
    det = float(np.linalg.det(t))
    if abs(det) < 1e-14 * max(1.0, float(np.max(np.abs(t)))) ** 2:
        raise DegenerateTransformationError("Transformation matrix is singular", details={"det": det})
    t_inv = np.linalg.inv(t)
    zetas = [math.atan2(t[0, 1], t[0, 0]), math.atan2(t[1, 1], t[1, 0])]
    kinks = normalize_angles(AXIS_ANGLES + rotated_kinks(zetas))
    linear = t_inv @ sys.matrix @ t

    def pulled(terms: Callable) -> Callable:
        def projections(phi):
            c, s = _cs(phi)
            x1 = t[0, 0] * c + t[0, 1] * s
            x2 = t[1, 0] * c + t[1, 1] * s
            f, g = terms(x1, x2)
            g1 = t_inv[0, 0] * f + t_inv[0, 1] * g
            g2 = t_inv[1, 0] * f + t_inv[1, 1] * g
            return c * g1 + s * g2, c * g2 - s * g1
        return projections

    quad = pulled(lambda x1, x2: quadratic_terms(sys, x1, x2))
    cubic = pulled(lambda x1, x2: smooth_cubic_terms(sys.smooth, x1, x2))
    (l1, l2), (l3, l4) = linear

    def big_m(phi):
        c, s = _cs(phi)
        return l1 * c * c + (l2 + l3) * s * c + l4 * s * s

    def big_w(phi):
        c, s = _cs(phi)
        return l3 * c * c + (l4 - l1) * s * c - l2 * s * s

    nonsmooth = not sys.quad.is_zero
    return PolarSamples(
        switching_angles=kinks,
        chi2=AngleFunction(lambda phi: quad(phi)[0], kinks, not nonsmooth, "chi2"),
        Omega1=AngleFunction(lambda phi: quad(phi)[1], kinks, not nonsmooth, "Omega1"),
        chi3=AngleFunction(lambda phi: cubic(phi)[0], (), True, "chi3"),
        Omega2=AngleFunction(lambda phi: cubic(phi)[1], (), True, "Omega2"),
        M=AngleFunction(big_m, (), True, "M"),
        W=AngleFunction(big_w, (), True, "W"),
        extras={"transform": t, "linear": linear},
    )


class PolarField:
    """
    Pointwise evaluation of the polar vector field for integration.

    ``rates(phi, r, u)`` returns (A, r_dot, u_dot) with A = phi_dot; the
    angle-parametrized equations are r' = r_dot / A and u' = u_dot / A.
    Homogeneous terms are obtained by projecting the Cartesian terms at
    (cos phi, sin phi), which is exact because every nonlinear block is
    positively homogeneous.
    """

    def __init__(self, system: Union[PlanarSystem, System3D, SystemND]):
        if isinstance(system, System3D):
            system = system.to_nd()
        self.system = system
        self.planar: PlanarSystem = system if isinstance(system, PlanarSystem) else system.planar
        self.dim = 0 if isinstance(system, PlanarSystem) else system.dim
        self.kinks = AXIS_ANGLES
        (self._m1, self._m2), (self._m3, self._m4) = self.planar.matrix
        self._cubic = any(self.planar.smooth.cubic)
        if self.dim == 1:
            nd = system
            self._a = float(nd.transverse[0, 0])
            self._quu = float(nd.uu[0, 0, 0])
            self._uv, self._uw = float(nd.uv[0, 0]), float(nd.uw[0, 0])
            self._c6, self._c7 = float(nd.c6[0]), float(nd.c7[0])
            self._c8, self._c9 = float(nd.c8[0]), float(nd.c9[0])
            self._vw = float(nd.vw[0])
            (self._h11, self._h12), (self._h21, self._h22) = nd.h[0]
            self._hs = nd.h_slopes[0]

    @property
    def orientation(self) -> float:
        return self.planar.orientation

    def rates(self, phi: float, r: float, u=None):
        c, s = math.cos(phi), math.sin(phi)
        l1 = self._m1 * c + self._m2 * s
        l2 = self._m3 * c + self._m4 * s
        f2, g2 = quadratic_terms(self.planar, c, s)
        radial = c * l1 + s * l2 + r * (c * f2 + s * g2)
        angular = c * l2 - s * l1 + r * (c * g2 - s * f2)
        if self._cubic:
            f3, g3 = smooth_cubic_terms(self.planar.smooth, c, s)
            radial += r * r * (c * f3 + s * g3)
            angular += r * r * (c * g3 - s * f3)
        if self.dim == 0:
            return angular, r * radial, None
        if self.dim == 1:
            radial += u * (self._c6 * c * c + (self._c7 + self._c8) * c * s + self._c9 * s * s)
            angular += u * (self._c8 * c * c + (self._c9 - self._c6) * c * s - self._c7 * s * s)
            hs = self._hs
            ups = (self._vw * c * s
                   + self._h11 * c * gen_abs(c, hs[0]) + self._h12 * c * gen_abs(s, hs[1])
                   + self._h21 * s * gen_abs(c, hs[2]) + self._h22 * s * gen_abs(s, hs[3]))
            du = (self._a * u + self._quu * u * u + r * u * (self._uv * c + self._uw * s)
                  + r * r * ups)
            return angular, r * radial, du
        nd = self.system
        u = np.asarray(u, dtype=float)
        radial += float(u @ (nd.c6 * c * c + (nd.c7 + nd.c8) * c * s + nd.c9 * s * s))
        angular += float(u @ (nd.c8 * c * c + (nd.c9 - nd.c6) * c * s - nd.c7 * s * s))
        du = (nd.transverse @ u + np.einsum("ijl,j,l->i", nd.uu, u, u)
              + r * ((nd.uv * c + nd.uw * s) @ u) + r * r * upsilon_terms(nd, c, s))
        return angular, r * radial, du
