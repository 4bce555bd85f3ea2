"""
Unit tests for piecewise quadrature and the averaged normal form.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nonsmooth_hopf.averaging import (
    averaged_equilibrium,
    averaged_form,
    gauss_legendre,
    integrate,
    nested_integral,
    panel_breaks,
    piecewise_average,
    piecewise_integral,
)
from nonsmooth_hopf.core import ABS, AngleFunction, NonsmoothQuadCoeffs, PlanarSystem, SlopePair
from nonsmooth_hopf.utils.config import QuadratureConfig
from nonsmooth_hopf.utils.exceptions import DegenerateCoefficientError, KinkListError, ModelError


class TestPanels:
    """Test breakpoints and the base rule."""

    def test_weights_sum_to_interval_length(self):
        """Test Gauss-Legendre weights."""
        nodes, weights = gauss_legendre(7)
        assert weights.sum() == pytest.approx(2.0)
        assert np.all(np.abs(nodes) < 1.0)

    def test_breaks_include_kinks(self):
        """Test that interior kinks become breakpoints."""
        breaks = panel_breaks([0.5 * math.pi, 1.5 * math.pi])
        np.testing.assert_allclose(breaks, [0.0, 0.5 * math.pi, 1.5 * math.pi, 2 * math.pi])

    def test_breaks_wrap_modulo_two_pi(self):
        """Test that kinks are repeated every period inside a longer interval."""
        breaks = panel_breaks([0.0], a=1.0, b=8.0)
        np.testing.assert_allclose(breaks, [1.0, 2 * math.pi, 8.0])


class TestIntegrate:
    """Test piecewise integration."""

    def test_absolute_cosine(self):
        """Test that splitting at the kinks integrates |cos| exactly."""
        f = AngleFunction(lambda phi: np.abs(np.cos(phi)), (0.5 * math.pi, 1.5 * math.pi), False, "abscos")
        result = integrate(f)
        assert result.value == pytest.approx(4.0, abs=1e-12)
        assert result.panels >= 3

    def test_missing_kinks(self):
        """Test that a non-smooth integrand without kinks is refused."""
        f = AngleFunction(lambda phi: np.abs(np.cos(phi)), (), False, "abscos")
        with pytest.raises(KinkListError):
            integrate(f)

    def test_explicit_kinks_for_plain_callable(self):
        """Test plain callables with a kink list."""
        value = piecewise_integral(lambda phi: np.maximum(np.sin(phi), 0.0), kinks=[0.0, math.pi])
        assert value == pytest.approx(2.0, abs=1e-12)

    def test_vector_valued(self):
        """Test integrands with a leading component axis."""
        value = piecewise_integral(lambda phi: np.stack([np.cos(phi) ** 2, np.sin(phi) ** 2]))
        np.testing.assert_allclose(value, [math.pi, math.pi], atol=1e-12)

    def test_average_of_constant(self):
        """Test the mean over one period."""
        assert piecewise_average(AngleFunction.constant(3.0)) == pytest.approx(3.0)

    def test_low_order_config(self):
        """Test that a low order still converges by bisection."""
        config = QuadratureConfig(order=4, abs_tol=1e-10, max_depth=12)
        value = piecewise_integral(np.exp, a=0.0, b=1.0, config=config)
        assert value == pytest.approx(math.e - 1.0, rel=1e-9)


class TestNestedIntegral:
    """Test iterated integrals."""

    def test_constant_integrands(self):
        """Test the integral of s over one period."""
        one = AngleFunction.constant(1.0)
        assert nested_integral(one, one) == pytest.approx(2 * math.pi ** 2, rel=1e-10)

    def test_trigonometric(self):
        """Test sin(s) times the integral of cos up to s."""
        assert nested_integral(np.sin, np.cos) == pytest.approx(math.pi, rel=1e-10)

    def test_kinked_inner(self):
        """Test an inner integrand with kinks on the axes."""
        inner = AngleFunction(lambda phi: np.abs(np.sin(phi)), (0.0, math.pi), False, "abssin")
        outer = AngleFunction.constant(1.0)
        # integral over s of the integral of |sin| from 0 to s
        assert nested_integral(outer, inner) == pytest.approx(4.0 * math.pi, rel=1e-9)


class TestAveragedForm:
    """Test the averaged radial equation."""

    def test_quadratic_coefficient(self, subcritical_system):
        """Test the quadratic coefficient 2 sigma_#/(3 pi omega)."""
        nf = averaged_form(subcritical_system)
        assert nf.quadratic == pytest.approx(8.0 / (3.0 * math.pi))
        assert nf.max_rel_diff() < 1e-8

    def test_cubic_coefficient(self, second_order_system):
        """Test the cubic coefficient of a second-order degenerate system."""
        nf = averaged_form(second_order_system)
        sigma_2 = math.pi / 2 - 2.0 / 3.0
        assert nf.quadratic == pytest.approx(0.0, abs=1e-12)
        assert nf.cubic == pytest.approx(-sigma_2 / (2 * math.pi))
        assert nf.cubic_quadrature == pytest.approx(nf.cubic, abs=1e-9)

    def test_equilibrium(self, subcritical_system):
        """Test the equilibrium on either side of the bifurcation."""
        below = averaged_form(subcritical_system.with_mu(-0.01))
        above = averaged_form(subcritical_system.with_mu(0.01))
        assert averaged_equilibrium(below) == pytest.approx(3 * math.pi * 0.01 / 8)
        assert averaged_equilibrium(above) is None
        assert averaged_equilibrium(averaged_form(subcritical_system)) == 0.0

    def test_degenerate_equilibrium(self, second_order_system):
        """Test that a vanishing quadratic coefficient raises."""
        with pytest.raises(DegenerateCoefficientError):
            averaged_equilibrium(averaged_form(second_order_system))

    def test_general_slopes(self):
        """Test that general slopes use sigma_tilde and the sigma_2 integral."""
        quad = NonsmoothQuadCoeffs(a11=1.0, b22=1.0, alpha=(SlopePair(-1.0, 5.0), ABS, ABS, ABS))
        nf = averaged_form(PlanarSystem(quad=quad))
        # sigma_tilde = 1 * 6 + 1 * 2
        assert nf.quadratic == pytest.approx(16.0 / (3.0 * math.pi))
        assert nf.max_rel_diff() < 1e-8
        below = averaged_form(PlanarSystem(mu=-0.01, quad=quad))
        assert averaged_equilibrium(below) == pytest.approx(3.0 * math.pi * 0.01 / 16.0)

    @given(lam=st.floats(min_value=0.1, max_value=10.0), mu=st.floats(min_value=1e-4, max_value=0.05))
    @settings(max_examples=40, deadline=None)
    def test_scale_equivariance(self, lam, mu):
        """Test quadratic -> lam * quadratic and equilibrium -> equilibrium / lam under q -> lam q."""
        quad = NonsmoothQuadCoeffs(a11=1.0, a12=-0.5, b21=0.7, b22=0.3, beta=(ABS, SlopePair(-2.0, 0.5), ABS, ABS))
        base = averaged_form(PlanarSystem(mu=-mu, quad=quad))
        scaled = averaged_form(PlanarSystem(mu=-mu, quad=quad.scaled(lam)))
        assert scaled.quadratic == pytest.approx(lam * base.quadratic, rel=1e-12)
        assert scaled.quadratic_quadrature == pytest.approx(lam * base.quadratic_quadrature, rel=1e-9)
        assert averaged_equilibrium(scaled) == pytest.approx(averaged_equilibrium(base) / lam, rel=1e-12)

    def test_general_linear_part_refused(self):
        """Test that a general linear part is refused."""
        with pytest.raises(ModelError):
            averaged_form(PlanarSystem(linear=[[0.0, -2.0], [1.0, 0.0]]))
