"""
Cartesian right-hand sides of planar, 3D and nD systems.

The term functions accept floats or numpy arrays of equal shape, so the same
code serves pointwise integration and vectorized quadrature.
"""

from typing import Tuple

import numpy as np

from .genabs import ArrayLike, gen_abs
from .types import NonsmoothQuadCoeffs, PlanarSystem, SmoothCoeffs, System3D, SystemND


def modulus_terms(q: NonsmoothQuadCoeffs, v: ArrayLike, w: ArrayLike) -> Tuple[ArrayLike, ArrayLike]:
    """Second-order modulus terms (f, g) of the planar block."""
    al, be = q.alpha, q.beta
    f = (q.a11 * v * gen_abs(v, al[0]) + q.a12 * v * gen_abs(w, al[1])
         + q.a21 * w * gen_abs(v, al[2]) + q.a22 * w * gen_abs(w, al[3]))
    g = (q.b11 * v * gen_abs(v, be[0]) + q.b12 * v * gen_abs(w, be[1])
         + q.b21 * w * gen_abs(v, be[2]) + q.b22 * w * gen_abs(w, be[3]))
    return f, g


def smooth_quadratic_terms(s: SmoothCoeffs, v: ArrayLike, w: ArrayLike) -> Tuple[ArrayLike, ArrayLike]:
    f = s.a1 * v * v + s.a2 * v * w + s.a3 * w * w
    g = s.b1 * v * v + s.b2 * v * w + s.b3 * w * w
    return f, g


def smooth_cubic_terms(s: SmoothCoeffs, v: ArrayLike, w: ArrayLike) -> Tuple[ArrayLike, ArrayLike]:
    f = s.ca1 * v ** 3 + s.ca2 * v * w * w + s.ca3 * v * v * w + s.ca4 * w ** 3
    g = s.cb1 * v ** 3 + s.cb2 * v * w * w + s.cb3 * v * v * w + s.cb4 * w ** 3
    return f, g


def quadratic_terms(sys: PlanarSystem, v: ArrayLike, w: ArrayLike) -> Tuple[ArrayLike, ArrayLike]:
    """All homogeneous quadratic-order terms: modulus plus smooth quadratic."""
    fm, gm = modulus_terms(sys.quad, v, w)
    fq, gq = smooth_quadratic_terms(sys.smooth, v, w)
    return fm + fq, gm + gq


def eval_planar_rhs(sys: PlanarSystem, v: ArrayLike, w: ArrayLike) -> Tuple[ArrayLike, ArrayLike]:
    """Full planar right-hand side: linear, modulus, smooth quadratic and cubic terms."""
    (m1, m2), (m3, m4) = sys.matrix
    f2, g2 = quadratic_terms(sys, v, w)
    f3, g3 = smooth_cubic_terms(sys.smooth, v, w)
    return m1 * v + m2 * w + f2 + f3, m3 * v + m4 * w + g2 + g3


def upsilon_terms(sys: SystemND, v: ArrayLike, w: ArrayLike) -> np.ndarray:
    """Transverse forcing by the planar variables: q_vw v w plus h-modulus terms, shape (k, ...)."""
    rows = []
    for i in range(sys.dim):
        (h11, h12), (h21, h22) = sys.h[i]
        sl = sys.h_slopes[i]
        rows.append(
            sys.vw[i] * v * w
            + h11 * v * gen_abs(v, sl[0]) + h12 * v * gen_abs(w, sl[1])
            + h21 * w * gen_abs(v, sl[2]) + h22 * w * gen_abs(w, sl[3])
        )
    return np.array(rows)


def eval_nd_rhs(sys: SystemND, u: np.ndarray, v: float, w: float) -> Tuple[np.ndarray, float, float]:
    """Right-hand side of a SystemND at a single state (u, v, w)."""
    u = np.asarray(u, dtype=float)
    du = (sys.transverse @ u + np.einsum("ijl,j,l->i", sys.uu, u, u)
          + (sys.uv @ u) * v + (sys.uw @ u) * w + upsilon_terms(sys, v, w))
    dv, dw = eval_planar_rhs(sys.planar, v, w)
    dv += float(sys.c6 @ u) * v + float(sys.c7 @ u) * w
    dw += float(sys.c8 @ u) * v + float(sys.c9 @ u) * w
    return du, dv, dw


def eval_3d_rhs(sys: System3D, u: float, v: float, w: float) -> Tuple[float, float, float]:
    """Right-hand side of a System3D at (u, v, w)."""
    sl = sys.h_slopes
    du = (sys.c1 * u + sys.c2 * u * u + sys.c3 * u * v + sys.c4 * u * w + sys.c5 * v * w
          + sys.h11 * v * gen_abs(v, sl[0]) + sys.h12 * v * gen_abs(w, sl[1])
          + sys.h21 * w * gen_abs(v, sl[2]) + sys.h22 * w * gen_abs(w, sl[3]))
    dv, dw = eval_planar_rhs(sys.planar, v, w)
    return du, dv + sys.c6 * u * v + sys.c7 * u * w, dw + sys.c8 * u * v + sys.c9 * u * w
