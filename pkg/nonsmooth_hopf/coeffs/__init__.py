"""
Coeffs Module: Generalized Lyapunov Coefficients

Closed forms for planar, general-linear and three-dimensional systems,
each paired with a quadrature cross-check and collected in a report.
"""

from .report import CoefficientEntry, CoefficientReport, build_report
from .planar import (
    gamma23_by_quadrature,
    gamma23_planar,
    s_c,
    s_q,
    sigma_2,
    sigma_2_effective,
    sigma_cubic,
    sigma_hash,
    sigma_s,
    sigma_tilde,
    smoothed_sigma,
)
from .general import (
    SigmaResult,
    TransformGeometry,
    lambda_by_quadrature,
    lambda_general,
    normal_form_transform,
    sigma_general,
    sigma_general_from_transform,
)
from .ledger3d import (
    Gamma3TildeResult,
    auxiliary_scalars,
    gamma02_tilde_closed_form,
    gamma03_centre,
    gamma03_centre_closed_form,
    gamma3_tilde,
    gamma_hash,
    gamma_hash_effective,
    ledger_3d,
)

__all__ = [
    "CoefficientEntry",
    "CoefficientReport",
    "build_report",
    # Planar normal form
    "sigma_hash",
    "sigma_tilde",
    "sigma_2",
    "sigma_2_effective",
    "sigma_cubic",
    "s_q",
    "s_c",
    "sigma_s",
    "smoothed_sigma",
    "gamma23_planar",
    "gamma23_by_quadrature",
    # General linear part
    "lambda_general",
    "lambda_by_quadrature",
    "normal_form_transform",
    "sigma_general",
    "sigma_general_from_transform",
    "SigmaResult",
    "TransformGeometry",
    # 3D ledger
    "ledger_3d",
    "gamma3_tilde",
    "gamma_hash",
    "gamma_hash_effective",
    "gamma02_tilde_closed_form",
    "gamma03_centre",
    "gamma03_centre_closed_form",
    "auxiliary_scalars",
    "Gamma3TildeResult",
]
