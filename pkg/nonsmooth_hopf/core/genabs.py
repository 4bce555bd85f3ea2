"""Generalized absolute value with independent left and right slopes."""

from typing import Union

import numpy as np

from .types import SlopePair

ArrayLike = Union[float, np.ndarray]


def gen_abs(u: ArrayLike, s: SlopePair) -> ArrayLike:
    """
    Evaluate [u] = p_plus * u for u >= 0 and p_minus * u for u < 0.

    Scalars take a plain-float path; arrays are handled elementwise.
    """
    if isinstance(u, np.ndarray):
        return np.where(u >= 0.0, s.p_plus * u, s.p_minus * u)
    return s.p_plus * u if u >= 0.0 else s.p_minus * u
