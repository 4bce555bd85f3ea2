"""
Unit tests for verification module.
"""

import pytest

from nonsmooth_hopf.utils.exceptions import NoConvergenceError
from nonsmooth_hopf.verification import (
    AverageIdentityCheck,
    BautinFoldCheck,
    BranchSlopeCheck,
    CheckResult,
    CheckSeverity,
    CheckSuite,
    ClosedFormQuadratureCheck,
    GeneralLinearCheck,
    PropertyCheck,
    SecondOrderScalingCheck,
    ShimmyCheck,
    SmootheningCheck,
    TransverseSlavingCheck,
    TwoBranchCheck,
)


class StubCheck(PropertyCheck):
    """Check with a fixed outcome."""

    def __init__(self, passed=True, severity=CheckSeverity.HIGH, raises=False, **kwargs):
        super().__init__(**kwargs)
        self.name = f"stub-{severity.value}"
        self.severity = severity
        self.outcome = passed
        self.raises = raises

    def check(self) -> CheckResult:
        if self.raises:
            raise NoConvergenceError("stalled", details={"r": 0.1})
        return self.result(self.outcome, "fixed outcome", samples=self.count(3))


class TestCheckResult:
    """Test the CheckResult class."""

    def test_str(self):
        """Test the one-line rendering."""
        result = CheckResult(name="x", passed=False, severity=CheckSeverity.HIGH, message="off")
        assert "FAIL" in str(result)
        assert "[HIGH]" in str(result)

    def test_to_dict(self):
        """Test the JSON-ready rendering."""
        result = CheckResult(name="x", passed=True, severity=CheckSeverity.LOW, message="ok", details={"n": 1})
        data = result.to_dict()
        assert data["severity"] == "low"
        assert data["details"] == {"n": 1}

    def test_severity_rank(self):
        """Test the severity ordering."""
        assert CheckSeverity.CRITICAL.rank > CheckSeverity.HIGH.rank > CheckSeverity.MEDIUM.rank
        assert CheckSeverity.LOW.rank == 0


class TestPropertyCheck:
    """Test the PropertyCheck base class."""

    def test_run_records_history(self):
        """Test that results are timed and recorded."""
        check = StubCheck()
        result = check.run()
        assert result.passed
        assert result.elapsed >= 0.0
        assert check.get_history() == [result]
        check.clear_history()
        assert check.get_history() == []

    def test_package_error_becomes_failure(self):
        """Test that a raised package error fails the check."""
        result = StubCheck(raises=True).run()
        assert not result.passed
        assert "NoConvergenceError" in result.message
        assert result.details["r"] == 0.1

    def test_sample_override(self):
        """Test the sample count override."""
        assert StubCheck().run().details["samples"] == 3
        assert StubCheck(samples=7).run().details["samples"] == 7

    def test_should_fail(self):
        """Test strict and lenient modes."""
        failed = CheckResult(name="x", passed=False, severity=CheckSeverity.MEDIUM, message="")
        assert StubCheck(strict_mode=True).should_fail(failed)
        assert not StubCheck(strict_mode=False).should_fail(failed)


class TestCheckSuite:
    """Test suite aggregation."""

    def test_all_pass(self):
        """Test a passing suite."""
        suite = CheckSuite([StubCheck(), StubCheck()])
        summary = suite.run()
        assert summary.passed
        assert suite.passed
        assert summary.details["total_checks"] == 2

    def test_worst_severity(self):
        """Test that the summary carries the worst failed severity."""
        suite = CheckSuite([
            StubCheck(passed=False, severity=CheckSeverity.MEDIUM),
            StubCheck(passed=False, severity=CheckSeverity.CRITICAL),
            StubCheck(),
        ])
        summary = suite.run()
        assert not summary.passed
        assert summary.severity == CheckSeverity.CRITICAL
        assert summary.details["failed_checks"] == 2

    def test_lenient_mode(self):
        """Test that only critical failures block in lenient mode."""
        suite = CheckSuite([StubCheck(passed=False, severity=CheckSeverity.MEDIUM)], strict_mode=False)
        summary = suite.run()
        assert summary.passed
        assert suite.passed


class TestChecks:
    """Test inexpensive checks of the suite."""

    def test_average_identities(self):
        """Test the trigonometric period integrals."""
        result = AverageIdentityCheck().run()
        assert result.passed, result.message

    def test_smoothening(self):
        """Test that equal weights flip a sign somewhere and tuned weights never do."""
        result = SmootheningCheck().run()
        assert result.passed, result.message
        assert result.details["counterexample"] is not None

    @pytest.mark.parametrize("seed", [0, 1])
    def test_closed_forms(self, seed):
        """Test closed forms against quadrature on a few random systems."""
        result = ClosedFormQuadratureCheck(seed=seed, samples=3).run()
        assert result.passed, result.details

    def test_branch_slope(self):
        """Test the first-order branch side and slope on a three-point grid per side."""
        result = BranchSlopeCheck(points=3).run()
        assert result.passed, result.details
        assert result.details["sigma=-4"]["orbits"] == 3
        assert result.details["sigma=4"]["one_sided"]

    def test_two_branches(self):
        """Test the pair of centre-direction orbits and their absence when c2 flips."""
        result = TwoBranchCheck().run()
        assert result.passed, result.details
        assert result.details["orbits_when_violated"] == 0
        assert result.details["gamma_hash_eff"] == pytest.approx(2.0, abs=1e-8)

    def test_general_linear(self):
        """Test Lambda and the orbit side for a general linear part on two dynamic samples."""
        result = GeneralLinearCheck(samples=10, dynamic_samples=2).run()
        assert result.passed, result.details
        assert result.details["mismatches"] == []

    def test_second_order_scaling(self):
        """Test the square-root branch on a three-point grid."""
        result = SecondOrderScalingCheck(points=3).run()
        assert result.passed, result.details

    def test_transverse_slaving(self):
        """Test |u0| ~ r0^2 on a three-point grid."""
        result = TransverseSlavingCheck(points=3).run()
        assert result.passed, result.details

    def test_bautin_fold(self):
        """Test the detected fold on a coarse radius grid."""
        result = BautinFoldCheck(points=8).run()
        assert result.passed, result.details

    def test_shimmy(self):
        """Test one shimmy draw against simulation."""
        result = ShimmyCheck(samples=1).run()
        assert result.passed, result.details
