"""
Configuration management for nonsmooth-hopf.

This module handles loading, validating, and accessing numerical tolerances
and run settings.
"""

import os
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from .exceptions import InvalidConfigError, MissingConfigError


@dataclass
class QuadratureConfig:
    """Settings for piecewise Gauss-Legendre quadrature."""

    order: int = 20
    abs_tol: float = 1e-12
    max_depth: int = 8


@dataclass
class IntegratorConfig:
    """Settings for the angle-parametrized Runge-Kutta integrator."""

    rtol: float = 1e-10
    atol: float = 1e-12
    r_max: float = 0.5
    max_steps: int = 200_000
    min_angular_speed: float = 1e-3


@dataclass
class OrbitConfig:
    """Settings for periodic-orbit location and continuation."""

    bracket_lo: float = 1e-6
    bracket_factor: float = 10.0
    sweep_points: int = 40
    nonisolated_tol: float = 1e-8
    floquet_rel_step: float = 1e-3
    floquet_min_step: float = 1e-6
    newton_tol: float = 1e-11
    newton_max_iter: int = 50
    speed_margin: float = 0.5


@dataclass
class ToleranceConfig:
    """Acceptance tolerances and degeneracy thresholds."""

    quadrature: float = 1e-9
    orbit: float = 0.05
    slope: float = 0.05
    degeneracy: float = 1e-9
    vertical: float = 1e-10
    mu_max: float = 1e-2


@dataclass
class OutputConfig:
    """Settings for emitted artifacts."""

    csv_float_format: str = "%.16e"
    json_indent: int = 2


_SECTIONS = {
    "quadrature": QuadratureConfig,
    "integrator": IntegratorConfig,
    "orbit": OrbitConfig,
    "tolerances": ToleranceConfig,
    "output": OutputConfig,
}


@dataclass
class Config:
    """Main configuration class."""

    # Core settings
    debug: bool = False
    verbose: bool = False
    log_level: str = "INFO"
    log_file: Optional[Path] = None
    seed: int = 0

    # Component configurations
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    orbit: OrbitConfig = field(default_factory=OrbitConfig)
    tolerances: ToleranceConfig = field(default_factory=ToleranceConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    @classmethod
    def from_file(cls, config_path: Path) -> "Config":
        """Load configuration from YAML file."""
        if not config_path.exists():
            raise MissingConfigError(f"Configuration file not found: {config_path}")

        try:
            with open(config_path, "r") as f:
                data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise InvalidConfigError(f"Invalid YAML in configuration file: {e}")

        return cls.from_dict(data or {})

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Config":
        """Create configuration from dictionary."""
        config = cls()

        config.debug = data.get("debug", config.debug)
        config.verbose = data.get("verbose", config.verbose)
        config.log_level = data.get("log_level", config.log_level)
        config.seed = int(data.get("seed", config.seed))

        if log_file := data.get("log_file"):
            config.log_file = Path(log_file)

        for name, section_cls in _SECTIONS.items():
            if section_data := data.get(name):
                known = {f.name for f in fields(section_cls)}
                unknown = set(section_data) - known
                if unknown:
                    raise InvalidConfigError(
                        f"Unknown keys in '{name}' section: {sorted(unknown)}",
                        details={"section": name, "keys": sorted(unknown)},
                    )
                merged = {**getattr(config, name).__dict__, **section_data}
                setattr(config, name, section_cls(**merged))

        return config

    @classmethod
    def from_env(cls) -> "Config":
        """Load configuration from environment variables."""
        config = cls()

        if os.getenv("NSHOPF_DEBUG"):
            config.debug = True
            config.log_level = "DEBUG"

        if level := os.getenv("NSHOPF_LOG_LEVEL"):
            config.log_level = level.upper()

        if seed := os.getenv("NSHOPF_SEED"):
            try:
                config.seed = int(seed)
            except ValueError:
                raise InvalidConfigError(f"NSHOPF_SEED must be an integer, got {seed!r}")

        return config

    def validate(self) -> None:
        """Validate configuration."""
        if self.log_level.upper() not in ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]:
            raise InvalidConfigError(f"Invalid log level: {self.log_level}")

        if self.quadrature.order < 2:
            raise InvalidConfigError("quadrature.order must be at least 2")

        positive = {
            "quadrature.abs_tol": self.quadrature.abs_tol,
            "integrator.rtol": self.integrator.rtol,
            "integrator.atol": self.integrator.atol,
            "integrator.r_max": self.integrator.r_max,
            "orbit.bracket_lo": self.orbit.bracket_lo,
            "orbit.nonisolated_tol": self.orbit.nonisolated_tol,
            "orbit.speed_margin": self.orbit.speed_margin,
            "tolerances.quadrature": self.tolerances.quadrature,
            "tolerances.orbit": self.tolerances.orbit,
            "tolerances.slope": self.tolerances.slope,
        }
        for key, value in positive.items():
            if not value > 0:
                raise InvalidConfigError(f"{key} must be positive, got {value}")

        if self.orbit.bracket_lo >= self.integrator.r_max:
            raise InvalidConfigError("orbit.bracket_lo must lie below integrator.r_max")


# Global configuration instance
_config: Optional[Config] = None


def get_config() -> Config:
    """Get the global configuration instance."""
    global _config
    if _config is None:
        _config = load_config()
    return _config


def set_config(config: Config) -> None:
    """Set the global configuration instance."""
    global _config
    _config = config


def load_config(config_path: Optional[Path] = None) -> Config:
    """
    Load configuration with priority:
    1. Provided config file
    2. User config file (~/.nonsmooth-hopf/config.yaml)
    3. Environment variables
    4. Default values
    """
    config = Config.from_env()

    if config_path is None:
        config_path = Path.home() / ".nonsmooth-hopf" / "config.yaml"
        if not config_path.exists():
            config.validate()
            return config

    file_config = Config.from_file(config_path)
    # Environment debug switch survives a file that does not mention it
    if config.debug and not file_config.debug:
        file_config.debug = True
        file_config.log_level = "DEBUG"
    config = file_config

    config.validate()
    return config
