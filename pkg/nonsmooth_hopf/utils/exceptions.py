"""
Custom exceptions for nonsmooth-hopf.

This module defines all custom exception classes used throughout the package.
Each group maps to one CLI exit code (see ``exit_code_for``).
"""

from typing import Optional


class NonsmoothHopfError(Exception):
    """Base exception for all nonsmooth-hopf errors."""

    def __init__(self, message: str, details: Optional[dict] = None):
        self.message = message
        self.details = details or {}
        super().__init__(self.message)


# Model Errors
class ModelError(NonsmoothHopfError):
    """Base exception for invalid system definitions."""
    pass


class NotHopfCompatibleError(ModelError):
    """Raised when a linear part has no complex eigenvalue pair at the bifurcation."""
    pass


class AngularSpeedError(ModelError):
    """Raised when the angular speed of the polar form vanishes."""
    pass


class SlopeMismatchError(ModelError):
    """Raised when a formula restricted to absolute-value slopes receives general slopes."""
    pass


class DegenerateTransformationError(ModelError):
    """Raised when the normal-form transformation is singular."""
    pass


class DegenerateTransverseError(ModelError):
    """Raised when a formula needs a nonzero transverse eigenvalue c1."""
    pass


# Quadrature Errors
class QuadratureError(NonsmoothHopfError):
    """Base exception for piecewise quadrature errors."""
    pass


class KinkListError(QuadratureError):
    """Raised when a non-smooth integrand is integrated without a kink list."""
    pass


class QuadratureAccuracyError(QuadratureError):
    """Raised when adaptive refinement cannot reach the requested accuracy."""
    pass


# Dynamics Errors
class DynamicsError(NonsmoothHopfError):
    """Base exception for integration and orbit location errors."""
    pass


class IntegrationError(DynamicsError):
    """Raised when the integrator exceeds its step budget or step size underflows."""
    pass


class RadiusEscapedError(DynamicsError):
    """Raised when the radius leaves the configured neighbourhood of the equilibrium."""
    pass


class NonIsolatedOrbitsError(DynamicsError):
    """Raised when the return map is the identity across a whole bracket (vertical branch)."""
    pass


class NoConvergenceError(DynamicsError):
    """Raised when a Newton or root iteration fails to converge."""
    pass


class KernelDimensionError(DynamicsError):
    """Raised when the transverse monodromy has a kernel of dimension larger than one."""
    pass


# Prediction Errors
class PredictionError(NonsmoothHopfError):
    """Base exception for closed-form branch predictions."""
    pass


class DegenerateCoefficientError(PredictionError):
    """Raised when a Lyapunov-type coefficient needed by a formula vanishes."""
    pass


class InconclusiveError(PredictionError):
    """Raised when neither first- nor second-order carriers decide criticality."""
    pass


# Shimmy Errors
class ShimmyError(NonsmoothHopfError):
    """Base exception for the shimmying-wheel analysis."""
    pass


class NoComplexPairError(ShimmyError):
    """Raised when the Jacobian has only real eigenvalues."""
    pass


class ResonantError(ShimmyError):
    """Raised when the imaginary part of the critical pair is too small."""
    pass


class SingularTransformError(ShimmyError):
    """Raised when the eigenvector matrix T is singular."""
    pass


# Verification Errors
class VerificationError(NonsmoothHopfError):
    """Base exception for property-suite failures."""
    pass


# Alias kept for call sites that speak of validation
ValidationError = VerificationError


# Configuration Errors
class ConfigurationError(NonsmoothHopfError):
    """Base exception for configuration errors."""
    pass


class InvalidConfigError(ConfigurationError):
    """Raised when configuration is invalid."""
    pass


class MissingConfigError(ConfigurationError):
    """Raised when required configuration is missing."""
    pass


# CLI Errors
class CLIError(NonsmoothHopfError):
    """Base exception for CLI-related errors."""
    pass


class DescriptorError(CLIError):
    """Raised when a system descriptor does not match the schema."""
    pass


EXIT_SCHEMA = 2
EXIT_NUMERICAL = 3


def exit_code_for(error: NonsmoothHopfError) -> int:
    """Map an error to the CLI exit code of its group."""
    if isinstance(error, (DescriptorError, ConfigurationError)):
        return EXIT_SCHEMA
    return EXIT_NUMERICAL
