"""
Coefficient and averaged-normal-form commands.

``nshopf coeffs`` writes the CoefficientReport of a descriptor;
``nshopf averaged`` writes the averaged radial equation of a planar one.
"""

from typing import TYPE_CHECKING, Optional

from ...averaging.normal_form import averaged_equilibrium, averaged_form
from ...coeffs.report import build_report
from ...core.descriptor import load_system
from ...core.types import PlanarSystem
from ...utils.decorators import validate_file_exists
from ...utils.exceptions import DegenerateCoefficientError, DescriptorError
from ..io import emit_json

if TYPE_CHECKING:
    from ...utils import Config, HopfLogger


def load_dynamic_system(input_path: str):
    """Planar, 3D or nD system from a descriptor; shimmy descriptors are rejected."""
    from ...shimmy.model import ShimmyParams

    system = load_system(input_path)
    if isinstance(system, ShimmyParams):
        raise DescriptorError(
            "Shimmy descriptors are analysed by the 'shimmy' command", details={"input": str(input_path)}
        )
    return system


@validate_file_exists("input_path")
def run_coeffs(input_path: str, output: Optional[str], config: "Config", logger: "HopfLogger") -> None:
    system = load_dynamic_system(input_path)
    report = build_report(system, config)
    for name, entry in report.all_entries().items():
        logger.coefficient(name, entry.value, entry.method)
    for flag in report.flags:
        logger.warning(f"Flag: {flag}")
    emit_json(report.to_dict(), output, config)


@validate_file_exists("input_path")
def run_averaged(input_path: str, output: Optional[str], config: "Config", logger: "HopfLogger") -> None:
    system = load_dynamic_system(input_path)
    if not isinstance(system, PlanarSystem):
        system = system.planar
        logger.info("Averaging the planar block of a transverse system")
    nf = averaged_form(system)
    payload = nf.to_dict()
    payload["max_rel_diff"] = nf.max_rel_diff()
    try:
        payload["equilibrium"] = averaged_equilibrium(nf, config.tolerances.degeneracy)
    except DegenerateCoefficientError as e:
        logger.warning(e.message)
        payload["equilibrium"] = None
    emit_json(payload, output, config)
