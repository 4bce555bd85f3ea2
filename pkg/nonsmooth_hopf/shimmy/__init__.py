"""
Shimmy Module: The Towed Caster Wheel

Eigenstructure, normal-form transformation, criticality verdict and a
time-domain cross-check for the three-dimensional shimmy model with its
single switching surface q = 0.
"""

from .model import (
    ShimmyEigen,
    ShimmyParams,
    cubic_roots,
    discriminant,
    eigensplit,
    hopf_tuned_params,
)
from .analysis import (
    PotentialCertificate,
    ShimmyAnalysis,
    ShimmyVerdict,
    analyze_shimmy,
    classify_shimmy,
    normalize,
)
from .simulation import (
    SideScan,
    SimulationResult,
    return_defect,
    scan_side,
    simulate_verdict,
    tune_c1,
)

__all__ = [
    "ShimmyEigen",
    "ShimmyParams",
    "cubic_roots",
    "discriminant",
    "eigensplit",
    "hopf_tuned_params",
    "PotentialCertificate",
    "ShimmyAnalysis",
    "ShimmyVerdict",
    "analyze_shimmy",
    "classify_shimmy",
    "normalize",
    "SideScan",
    "SimulationResult",
    "return_defect",
    "scan_side",
    "simulate_verdict",
    "tune_c1",
]
