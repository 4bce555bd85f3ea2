"""
Averaged radial normal form.

Averaging the angle-parametrized radial equation over one turn gives

    r' = (mu/omega) r + (2 sigma_#/(3 pi omega)) r^2
         + (S_q/(8 omega^2) + S_c/(8 omega) - sigma_2/(2 pi omega^2)) r^3

whose positive equilibria correspond to periodic orbits. With general slopes
sigma_# is replaced by sigma_tilde.
"""

import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional

from ..core.polar import polar_decompose
from ..core.types import PlanarSystem
from ..utils.config import get_config
from ..utils.exceptions import DegenerateCoefficientError, ModelError
from .quadrature import piecewise_average

# Imported as a module to avoid a cycle: coeffs depends on averaging.quadrature.
from .. import coeffs as _coeffs


@dataclass(frozen=True)
class AveragedNormalForm:
    """Coefficients of the averaged radial equation with their quadrature values."""

    linear: float
    quadratic: float
    cubic: float
    linear_quadrature: float
    quadratic_quadrature: float
    cubic_quadrature: float
    mu: float = 0.0
    omega: float = 1.0

    def rhs(self, r: float) -> float:
        return r * (self.linear + r * (self.quadratic + r * self.cubic))

    def max_rel_diff(self) -> float:
        pairs = (
            (self.linear, self.linear_quadrature),
            (self.quadratic, self.quadratic_quadrature),
            (self.cubic, self.cubic_quadrature),
        )
        return max(abs(a - b) / max(1.0, abs(a)) for a, b in pairs)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def averaged_form(sys: PlanarSystem) -> AveragedNormalForm:
    """Closed-form and quadrature coefficients of the averaged normal form."""
    if not sys.is_normal_form:
        raise ModelError("averaged_form requires a normal-form linear part")
    planar = _coeffs.planar
    omega, q, s = sys.omega, sys.quad, sys.smooth

    quadratic = 2.0 * planar.sigma_tilde(q) / (3.0 * math.pi * omega)
    cubic = planar.s_q(s) / (8.0 * omega ** 2) + planar.s_c(s) / (8.0 * omega)
    if not q.is_zero:
        # sigma_2 has no closed form for general slopes; its defining integral stands in
        sigma2 = planar.sigma_2(q) if q.all_abs else planar.sigma_2_by_quadrature(q)
        cubic -= sigma2 / (2.0 * math.pi * omega ** 2)

    polar = polar_decompose(sys.with_mu(0.0))
    quadratic_quad = piecewise_average(polar.chi2 / omega)
    cubic_quad = piecewise_average(polar.chi3 / omega - polar.chi2 * polar.Omega1 / omega ** 2)

    return AveragedNormalForm(
        linear=sys.mu / omega,
        quadratic=quadratic,
        cubic=cubic,
        linear_quadrature=piecewise_average(polar_decompose(sys).M / omega),
        quadratic_quadrature=quadratic_quad,
        cubic_quadrature=cubic_quad,
        mu=sys.mu,
        omega=omega,
    )


def averaged_equilibrium(nf: AveragedNormalForm, threshold: Optional[float] = None) -> Optional[float]:
    """
    Nontrivial equilibrium -linear/quadratic, or None when it is negative.

    A vanishing linear coefficient returns 0 (the branch point itself).
    """
    if threshold is None:
        threshold = get_config().tolerances.degeneracy
    if abs(nf.quadratic) < threshold:
        raise DegenerateCoefficientError(
            "Averaged quadratic coefficient vanishes: second-order degenerate",
            details={"quadratic": nf.quadratic, "threshold": threshold},
        )
    if nf.linear == 0.0:
        return 0.0
    r = -nf.linear / nf.quadratic
    return r if r > 0.0 else None
