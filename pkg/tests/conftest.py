"""
Pytest configuration and shared fixtures.
"""

import pytest
from pathlib import Path
from unittest.mock import Mock

# Test data directory
FIXTURES_DIR = Path(__file__).parent / "fixtures"


@pytest.fixture(autouse=True)
def default_config():
    """Install a fresh default configuration so no user file leaks into a test."""
    from nonsmooth_hopf.utils import Config, set_config

    config = Config()
    set_config(config)
    yield config
    set_config(Config())


@pytest.fixture
def fixtures_dir():
    """Return path to test fixtures directory."""
    return FIXTURES_DIR


@pytest.fixture
def subcritical_system():
    """Planar normal form with sigma_# = 4 (orbits for mu < 0)."""
    from nonsmooth_hopf.core import PlanarSystem
    from nonsmooth_hopf.verification.checks import SUBCRITICAL_QUAD

    return PlanarSystem(quad=SUBCRITICAL_QUAD)


@pytest.fixture
def supercritical_system():
    """Planar normal form with sigma_# = -4 (orbits for mu > 0)."""
    from nonsmooth_hopf.core import PlanarSystem
    from nonsmooth_hopf.verification.checks import SUPERCRITICAL_QUAD

    return PlanarSystem(quad=SUPERCRITICAL_QUAD)


@pytest.fixture
def second_order_system():
    """sigma_# = 0 with sigma_2 = pi/2 - 2/3."""
    from nonsmooth_hopf.core import NonsmoothQuadCoeffs, PlanarSystem

    return PlanarSystem(quad=NonsmoothQuadCoeffs(a11=1.0, a12=-2.0, b11=1.0))


@pytest.fixture
def mock_config():
    """Create a mock configuration for testing."""
    from nonsmooth_hopf.utils import Config

    config = Mock(spec=Config)
    real = Config()
    config.quadrature = real.quadrature
    config.integrator = real.integrator
    config.orbit = real.orbit
    config.tolerances = real.tolerances
    config.output = real.output
    config.seed = 0
    return config


@pytest.fixture
def mock_logger():
    """Create a mock logger for testing."""
    from nonsmooth_hopf.utils import HopfLogger

    logger = Mock(spec=HopfLogger)
    return logger


@pytest.fixture
def centre_system():
    """c1 = 0 with sigma_# = -4, c2 = 1 and c5 = 2: two orbits for mu > 0."""
    from nonsmooth_hopf.core import PlanarSystem, System3D
    from nonsmooth_hopf.verification.checks import CENTRE_QUAD

    return System3D(planar=PlanarSystem(quad=CENTRE_QUAD), c2=1.0, c5=2.0)
