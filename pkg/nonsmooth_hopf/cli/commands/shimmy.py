"""
Shimmy command implementation.
"""

from typing import TYPE_CHECKING, Optional

from ...core.descriptor import load_descriptor
from ...shimmy.analysis import analyze_shimmy
from ...shimmy.simulation import simulate_verdict
from ...utils.decorators import validate_file_exists
from ...utils.exceptions import DescriptorError
from ..io import emit_json

if TYPE_CHECKING:
    from ...utils import Config, HopfLogger


@validate_file_exists("input_path")
def run_shimmy(
    input_path: str,
    output: Optional[str],
    simulate: bool,
    eps: float,
    config: "Config",
    logger: "HopfLogger",
) -> None:
    """
    Analyse a shimmy descriptor and optionally cross-check by simulation.

    Args:
        input_path: Descriptor of kind "shimmy"
        output: Artifact path, or None/"-" for stdout
        simulate: Also integrate the model at mu = +/-eps
        eps: Distance from criticality used by the simulation
    """
    descriptor = load_descriptor(input_path)
    if descriptor.kind != "shimmy":
        raise DescriptorError(
            f"'shimmy' needs a descriptor of kind 'shimmy', got '{descriptor.kind}'",
            details={"kind": descriptor.kind},
        )
    params = descriptor.to_system()
    analysis = analyze_shimmy(params, config)
    logger.verdict("Shimmy", analysis.verdict.value)
    if analysis.certificate is not None and not analysis.certificate.convex:
        logger.info(
            f"Potential saddle at |v| = {analysis.certificate.saddle:.6g},"
            f" barrier {analysis.certificate.barrier:.6g}"
        )
    payload = analysis.to_dict()
    if simulate:
        result = simulate_verdict(params, eps, config)
        verdict = None if result.verdict is None else result.verdict.value
        logger.verdict("Simulation", str(verdict))
        payload["simulation"] = result.to_dict()
    emit_json(payload, output, config)
