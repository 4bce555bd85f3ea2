"""
Dynamics Module: Return Maps, Periodic Orbits and Branches

Angle-parametrized integration with kink-aligned steps, Poincare maps on
phi = 0, orbit location by bracketing, branch continuation, boundary value
problems for transverse variables and a time-domain event integrator.
"""

from .integrator import PhiIntegrator, Trajectory, integrate_phi
from .poincare import poincare, poincare3, radial_defect, return_time
from .orbits import (
    CSV_COLUMNS,
    AmplitudeBranch,
    Branch,
    BranchKind,
    FoldPoint,
    Orbit,
    Stability,
    classify_stability,
    continue_branch,
    continue_in_amplitude,
    detect_fold,
    find_orbit,
    fit_slope,
    floquet_slope,
    locate_root,
    mu_at_radius,
    predicted_radius,
    radially_linear,
    radius_cap,
    speed_radius,
)
from .bvp import (
    MonodromyResult,
    centre_seeds,
    continue_3d_branch,
    kernel_dimension,
    linear_monodromy,
    monodromy_nd,
    solve_3d_bvp,
    solve_nd_bvp,
)
from .events import SwitchedResult, switched_integrate, time_domain_return

__all__ = [
    "PhiIntegrator",
    "Trajectory",
    "integrate_phi",
    "poincare",
    "poincare3",
    "radial_defect",
    "return_time",
    "CSV_COLUMNS",
    "AmplitudeBranch",
    "Branch",
    "BranchKind",
    "FoldPoint",
    "Orbit",
    "Stability",
    "classify_stability",
    "continue_branch",
    "continue_in_amplitude",
    "detect_fold",
    "find_orbit",
    "fit_slope",
    "floquet_slope",
    "locate_root",
    "mu_at_radius",
    "predicted_radius",
    "radially_linear",
    "radius_cap",
    "speed_radius",
    "MonodromyResult",
    "centre_seeds",
    "continue_3d_branch",
    "kernel_dimension",
    "linear_monodromy",
    "monodromy_nd",
    "solve_3d_bvp",
    "solve_nd_bvp",
    "SwitchedResult",
    "switched_integrate",
    "time_domain_return",
]
