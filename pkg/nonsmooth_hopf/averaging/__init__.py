"""
Averaging Module: Piecewise Quadrature and Averaged Normal Form

Gauss-Legendre quadrature split at switching angles, and the averaged
radial equation whose equilibria are the bifurcating periodic orbits.
"""

from .quadrature import (
    QuadratureResult,
    gauss_legendre,
    integrate,
    nested_integral,
    panel_breaks,
    piecewise_average,
    piecewise_integral,
)
from .normal_form import AveragedNormalForm, averaged_equilibrium, averaged_form

__all__ = [
    "QuadratureResult",
    "gauss_legendre",
    "integrate",
    "nested_integral",
    "panel_breaks",
    "piecewise_average",
    "piecewise_integral",
    "AveragedNormalForm",
    "averaged_equilibrium",
    "averaged_form",
]
