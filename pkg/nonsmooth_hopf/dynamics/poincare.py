"""
Return maps on the section phi = 0.
"""

from typing import Optional, Sequence, Tuple, Union

import numpy as np

from ..core.types import System3D, SystemND
from ..utils.config import IntegratorConfig
from ..utils.exceptions import AngularSpeedError, RadiusEscapedError
from .integrator import AnySystem, integrate_phi


def poincare(system: AnySystem, r0: float, config: Optional[IntegratorConfig] = None) -> float:
    """Radius after one turn; transverse variables start at zero."""
    if r0 == 0.0:
        return 0.0
    return integrate_phi(system, r0, config=config).r_end


def poincare3(
    system: Union[System3D, SystemND],
    u0: Union[float, Sequence[float]],
    r0: float,
    config: Optional[IntegratorConfig] = None,
) -> Tuple[Union[float, np.ndarray], float]:
    """(u, r) after one turn; u is a float for System3D and an array otherwise."""
    traj = integrate_phi(system, r0, u0=u0, config=config)
    if isinstance(system, System3D):
        return float(traj.u_end[0]), traj.r_end
    return traj.u_end, traj.r_end


def return_time(system: AnySystem, r0: float, u0=None, config: Optional[IntegratorConfig] = None) -> float:
    """Physical time of one turn."""
    return integrate_phi(system, r0, u0=u0, config=config).period


def radial_defect(system: AnySystem, r: float, config: Optional[IntegratorConfig] = None) -> float:
    """
    D(r) = (P(r) - r) / r.

    A trajectory that leaves the neighbourhood counts as growing (D = 1),
    since the escape itself means P(r) exceeds r_max >= r. A trajectory on
    which phi' vanishes has left it as well.
    """
    try:
        return (poincare(system, r, config) - r) / r
    except (RadiusEscapedError, AngularSpeedError):
        return 1.0
