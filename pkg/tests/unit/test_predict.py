"""
Unit tests for closed-form branch predictions.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nonsmooth_hopf.coeffs import build_report, sigma_hash
from nonsmooth_hopf.core import ABS, NonsmoothQuadCoeffs, PlanarSystem, SlopePair, SmoothCoeffs
from nonsmooth_hopf.dynamics import continue_branch
from nonsmooth_hopf.predict import (
    Order,
    Prediction,
    PredictionKind,
    bautin_fold,
    classify,
    fold_from_gammas,
    fold_radius,
    r0_first,
    r0_second,
    r0_smooth,
    scalar_branch,
    second_order_kind,
)
from nonsmooth_hopf.utils.exceptions import DegenerateCoefficientError, InconclusiveError

SIGMA_2 = math.pi / 2 - 2.0 / 3.0


class TestRadii:
    """Test leading-order radii."""

    def test_first_order(self):
        """Test r0 = -3 pi mu / (2 sigma_#)."""
        assert r0_first(4.0, -0.01) == pytest.approx(3 * math.pi * 0.01 / 8)
        assert r0_first(4.0, 0.01) is None
        assert r0_first(-4.0, 0.01) == pytest.approx(3 * math.pi * 0.01 / 8)

    def test_first_order_degenerate(self):
        """Test that a vanishing carrier raises."""
        with pytest.raises(DegenerateCoefficientError):
            r0_first(0.0, 0.01)

    def test_second_order(self):
        """Test r0 = sqrt(2 pi omega mu / sigma_2)."""
        assert r0_second(2.0 * math.pi, 1.0, 0.04) == pytest.approx(0.2)
        assert r0_second(2.0 * math.pi, 1.0, -0.04) is None

    def test_smooth(self):
        """Test the smooth Hopf radius."""
        assert r0_smooth(-1.0, 0.25) == pytest.approx(0.5)
        assert r0_smooth(-1.0, -0.25) is None

    def test_second_order_kind(self):
        """Test that the sign of omega * sigma_2 decides."""
        assert second_order_kind(1.0, 1.0) == PredictionKind.SUPERCRITICAL
        assert second_order_kind(-1.0, 1.0) == PredictionKind.SUBCRITICAL
        assert second_order_kind(1.0, -1.0) == PredictionKind.SUBCRITICAL


class TestFolds:
    """Test fold loci of the second-order unfolding."""

    def test_bautin_fold(self):
        """Test mu* = -2 omega sigma_#^2 / (9 pi sigma_2)."""
        assert bautin_fold(0.3, 1.0, 1.0) == pytest.approx(-0.02 / math.pi)

    def test_fold_from_gammas(self):
        """Test the fold of the return-map polynomial."""
        assert fold_from_gammas(2.0, -1.0, 1.0) == pytest.approx(-1.0 / (2.0 * math.pi))
        assert fold_radius(2.0, -1.0) == pytest.approx(1.0)

    def test_fold_is_a_double_root(self):
        """Test that the fold radius is a double root at the fold parameter."""
        gamma2, gamma3, omega = 2.0, -1.0, 1.0
        mu = fold_from_gammas(gamma2, gamma3, omega)
        r = fold_radius(gamma2, gamma3)
        assert 2 * math.pi * mu / omega + gamma2 * r + gamma3 * r * r == pytest.approx(0.0, abs=1e-12)
        assert gamma2 + 2 * gamma3 * r == pytest.approx(0.0)

    def test_fold_needs_gamma3(self):
        """Test that Gamma3 = 0 raises."""
        with pytest.raises(DegenerateCoefficientError):
            fold_from_gammas(1.0, 0.0, 1.0)


class TestScalarBranch:
    """Test the scalar canonical models."""

    def test_j1(self):
        """Test both roots of u' = mu u + sigma u [u]."""
        assert scalar_branch(1, ABS, -1.0, 1.0) == pytest.approx((-1.0, 1.0))

    def test_j2(self):
        """Test the single root of u' = mu u + sigma u^2 [u]."""
        assert scalar_branch(2, ABS, -1.0, 1.0) == pytest.approx((1.0,))

    def test_asymmetric_slopes(self):
        """Test that each side uses its own slope."""
        roots = scalar_branch(1, SlopePair(-2.0, 1.0), -1.0, 1.0)
        assert roots == pytest.approx((-0.5, 1.0))

    def test_mu_zero(self):
        """Test that only the origin remains at mu = 0."""
        assert scalar_branch(2, ABS, -1.0, 0.0) == (0.0,)

    def test_invalid_power(self):
        """Test that j outside {1, 2} is rejected."""
        with pytest.raises(ValueError):
            scalar_branch(3, ABS, -1.0, 1.0)


class TestClassify:
    """Test criticality routing from a coefficient report."""

    def test_subcritical(self, subcritical_system):
        """Test the first-order subcritical case."""
        prediction = classify(build_report(subcritical_system))
        assert prediction.kind == PredictionKind.SUBCRITICAL
        assert prediction.order == Order.FIRST
        assert prediction.r0_of_mu[0] == pytest.approx(-3 * math.pi / 8)
        assert prediction.validity == "mu < 0"
        assert prediction.radius(-0.01) == pytest.approx(3 * math.pi * 0.01 / 8)
        assert prediction.radius(0.01) is None

    def test_supercritical(self, supercritical_system):
        """Test the first-order supercritical case."""
        prediction = classify(build_report(supercritical_system))
        assert prediction.kind == PredictionKind.SUPERCRITICAL
        assert prediction.validity == "mu > 0"
        assert prediction.carrier == "sigma_hash"

    def test_second_order(self, second_order_system):
        """Test the fallback to sigma_2 when sigma_# vanishes."""
        prediction = classify(build_report(second_order_system))
        assert prediction.kind == PredictionKind.SUPERCRITICAL
        assert prediction.order == Order.SECOND
        assert prediction.r0_of_mu[0] == pytest.approx(2 * math.pi / SIGMA_2)
        assert prediction.radius(0.01) == pytest.approx(math.sqrt(2 * math.pi * 0.01 / SIGMA_2))

    def test_vertical(self):
        """Test that a purely linear system gives a vertical branch."""
        prediction = classify(build_report(PlanarSystem()))
        assert prediction.kind == PredictionKind.VERTICAL
        assert prediction.validity == "mu = 0"
        assert prediction.radius(0.01) is None

    def test_inconclusive(self):
        """Test that vanishing first- and second-order carriers raise."""
        report = build_report(PlanarSystem(smooth=SmoothCoeffs(a1=1.0)))
        with pytest.raises(InconclusiveError):
            classify(report)

    def test_general_linear_part(self, subcritical_system):
        """Test routing through the rescaled Sigma."""
        system = PlanarSystem(linear=[[0.0, -1.0], [1.0, 0.0]], quad=subcritical_system.quad)
        prediction = classify(build_report(system))
        assert prediction.kind == PredictionKind.SUBCRITICAL
        assert prediction.carrier_value == pytest.approx(4.0)

    def test_to_dict(self, subcritical_system):
        """Test the JSON-ready rendering."""
        data = classify(build_report(subcritical_system)).to_dict()
        assert data["kind"] == "subcritical"
        assert data["order"] == "first"
        assert data["validity"] == "mu < 0"

    def test_empty_prediction(self):
        """Test a prediction without branch."""
        prediction = Prediction(kind=PredictionKind.NONE)
        assert prediction.validity == "none"
        assert prediction.radius(0.1) is None
        assert prediction.in_window(0.005)


def random_first_order_quad(rng, min_sigma=0.5):
    """Modulus coefficients in [-1, 1] with |sigma_#| above ``min_sigma``."""
    while True:
        q = NonsmoothQuadCoeffs.from_matrices(rng.uniform(-1.0, 1.0, (2, 2)), rng.uniform(-1.0, 1.0, (2, 2)))
        if abs(sigma_hash(q)) > min_sigma:
            return q


class TestPredictionProperties:
    """Randomized properties of the closed-form predictions."""

    @given(
        sigma=st.floats(min_value=-10.0, max_value=10.0),
        sigma_2=st.floats(min_value=0.01, max_value=10.0),
        omega=st.floats(min_value=0.1, max_value=5.0),
    )
    @settings(max_examples=100, deadline=None)
    def test_bautin_fold_parity(self, sigma, sigma_2, omega):
        """Test that the fold is even in sigma_# and odd in sigma_2."""
        fold = bautin_fold(sigma, sigma_2, omega)
        assert bautin_fold(-sigma, sigma_2, omega) == pytest.approx(fold, rel=1e-14, abs=0.0)
        assert bautin_fold(sigma, -sigma_2, omega) == pytest.approx(-fold, rel=1e-14, abs=0.0)

    @pytest.mark.parametrize("count", [5, pytest.param(50, marks=pytest.mark.slow)])
    def test_classify_matches_continuation_side(self, count):
        """Test that the predicted criticality names the side where orbits are found."""
        rng = np.random.default_rng(11)
        grid = [-2e-3, -1e-3, 1e-3, 2e-3]
        for _ in range(count):
            system = PlanarSystem(quad=random_first_order_quad(rng))
            prediction = classify(build_report(system))
            branch = continue_branch(system, grid)
            assert branch.points, system.quad
            assert branch.kind.value == prediction.kind.value, system.quad
            side = -1.0 if prediction.kind == PredictionKind.SUBCRITICAL else 1.0
            assert all(np.sign(p.mu) == side for p in branch.points)
