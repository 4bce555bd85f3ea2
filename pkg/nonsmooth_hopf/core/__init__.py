"""
Core Module: System Types and Right-Hand Sides

Immutable system definitions, the generalized absolute value, Cartesian
right-hand sides, polar decomposition and the JSON descriptor.
"""

from .types import (
    ABS,
    NonsmoothQuadCoeffs,
    PlanarSystem,
    SlopePair,
    SmoothCoeffs,
    System3D,
    SystemND,
)
from .genabs import gen_abs
from .rhs import eval_3d_rhs, eval_nd_rhs, eval_planar_rhs
from .polar import (
    AXIS_ANGLES,
    TWO_PI,
    AngleFunction,
    PolarField,
    PolarSamples,
    polar_decompose,
    transformed_polar,
)
from .descriptor import SystemDescriptor, load_descriptor, load_system, parse_descriptor

__all__ = [
    # Types
    "ABS",
    "SlopePair",
    "NonsmoothQuadCoeffs",
    "SmoothCoeffs",
    "PlanarSystem",
    "System3D",
    "SystemND",
    # Right-hand sides
    "gen_abs",
    "eval_planar_rhs",
    "eval_3d_rhs",
    "eval_nd_rhs",
    # Polar form
    "AXIS_ANGLES",
    "TWO_PI",
    "AngleFunction",
    "PolarField",
    "PolarSamples",
    "polar_decompose",
    "transformed_polar",
    # Descriptor
    "SystemDescriptor",
    "parse_descriptor",
    "load_descriptor",
    "load_system",
]
