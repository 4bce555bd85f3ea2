"""
Utils Module: Common Utilities

Shared configuration, logging, errors and decorators.
"""

from .config import (
    Config,
    QuadratureConfig,
    IntegratorConfig,
    OrbitConfig,
    ToleranceConfig,
    OutputConfig,
    get_config,
    set_config,
    load_config,
)
from .logging import (
    HopfLogger,
    get_logger,
    setup_logging,
)
from .exceptions import (
    NonsmoothHopfError,
    ModelError,
    NotHopfCompatibleError,
    AngularSpeedError,
    SlopeMismatchError,
    DegenerateTransformationError,
    DegenerateTransverseError,
    QuadratureError,
    KinkListError,
    QuadratureAccuracyError,
    DynamicsError,
    IntegrationError,
    RadiusEscapedError,
    NonIsolatedOrbitsError,
    NoConvergenceError,
    KernelDimensionError,
    PredictionError,
    DegenerateCoefficientError,
    InconclusiveError,
    ShimmyError,
    NoComplexPairError,
    ResonantError,
    SingularTransformError,
    VerificationError,
    ValidationError,
    ConfigurationError,
    InvalidConfigError,
    MissingConfigError,
    CLIError,
    DescriptorError,
    EXIT_SCHEMA,
    EXIT_NUMERICAL,
    exit_code_for,
)
from .decorators import (
    log_execution,
    validate_file_exists,
    handle_errors,
    suppress_float_warnings,
)

__all__ = [
    # Config
    "Config",
    "QuadratureConfig",
    "IntegratorConfig",
    "OrbitConfig",
    "ToleranceConfig",
    "OutputConfig",
    "get_config",
    "set_config",
    "load_config",
    # Logging
    "HopfLogger",
    "get_logger",
    "setup_logging",
    # Exceptions
    "NonsmoothHopfError",
    "ModelError",
    "NotHopfCompatibleError",
    "AngularSpeedError",
    "SlopeMismatchError",
    "DegenerateTransformationError",
    "DegenerateTransverseError",
    "QuadratureError",
    "KinkListError",
    "QuadratureAccuracyError",
    "DynamicsError",
    "IntegrationError",
    "RadiusEscapedError",
    "NonIsolatedOrbitsError",
    "NoConvergenceError",
    "KernelDimensionError",
    "PredictionError",
    "DegenerateCoefficientError",
    "InconclusiveError",
    "ShimmyError",
    "NoComplexPairError",
    "ResonantError",
    "SingularTransformError",
    "VerificationError",
    "ValidationError",
    "ConfigurationError",
    "InvalidConfigError",
    "MissingConfigError",
    "CLIError",
    "DescriptorError",
    "EXIT_SCHEMA",
    "EXIT_NUMERICAL",
    "exit_code_for",
    # Decorators
    "log_execution",
    "validate_file_exists",
    "handle_errors",
    "suppress_float_warnings",
]
