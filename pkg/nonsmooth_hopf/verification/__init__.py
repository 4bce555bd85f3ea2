"""
Verification Module: Property Suite

Closed forms are only trusted when they agree with quadrature, and
predictions only when located orbits bear them out. Each check below runs
one such comparison; ``nshopf verify`` runs them all.

Available Checks:
- ClosedFormQuadratureCheck: planar coefficients vs quadrature
- BranchSlopeCheck: first-order branch side and slope
- SecondOrderScalingCheck: square-root branch when sigma_# = 0
- AverageIdentityCheck: trigonometric period integrals
- TransverseSlavingCheck: 3D transverse amplitude ~ r0^2
- TwoBranchCheck: 3D centre direction
- GeneralLinearCheck: general 2x2 linear part
- SmootheningCheck: smoothened carriers
- ShimmyCheck: shimmy verdict vs simulation
- BautinFoldCheck: fold of the second-order degenerate unfolding
"""

from .base import CheckResult, CheckSeverity, CheckSuite, PropertyCheck
from .checks import (
    AverageIdentityCheck,
    BautinFoldCheck,
    BranchSlopeCheck,
    ClosedFormQuadratureCheck,
    GeneralLinearCheck,
    SecondOrderScalingCheck,
    ShimmyCheck,
    SmootheningCheck,
    TransverseSlavingCheck,
    TwoBranchCheck,
    full_suite,
    quick_suite,
)

__all__ = [
    # Base classes
    "CheckResult",
    "CheckSeverity",
    "CheckSuite",
    "PropertyCheck",
    # Checks
    "AverageIdentityCheck",
    "BautinFoldCheck",
    "BranchSlopeCheck",
    "ClosedFormQuadratureCheck",
    "GeneralLinearCheck",
    "SecondOrderScalingCheck",
    "ShimmyCheck",
    "SmootheningCheck",
    "TransverseSlavingCheck",
    "TwoBranchCheck",
    "full_suite",
    "quick_suite",
]
