"""
nonsmooth-hopf: Hopf bifurcations with second-order modulus terms

Generalized Lyapunov coefficients, averaged normal forms, return-map
continuation of the bifurcating orbits and the shimmying-wheel application.
"""

__version__ = "0.1.0"
__author__ = "nonsmooth-hopf Contributors"

from nonsmooth_hopf.core import PlanarSystem, SlopePair, System3D, SystemND, load_system
from nonsmooth_hopf.coeffs import build_report
from nonsmooth_hopf.predict import classify

__all__ = [
    "PlanarSystem",
    "SlopePair",
    "System3D",
    "SystemND",
    "load_system",
    "build_report",
    "classify",
    "__version__",
]
