"""
Base classes for property checks.

Every check of the suite inherits from PropertyCheck and reports a
CheckResult; CheckSuite runs a list of checks and aggregates them.
"""

import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np

from ..utils.exceptions import NonsmoothHopfError
from ..utils.logging import get_logger


class CheckSeverity(Enum):
    """Severity levels for check failures."""

    CRITICAL = "critical"  # wrong criticality verdict
    HIGH = "high"          # closed form and quadrature disagree
    MEDIUM = "medium"      # scaling law outside its tolerance band
    LOW = "low"            # diagnostic only

    @property
    def rank(self) -> int:
        return ["low", "medium", "high", "critical"].index(self.value)


@dataclass
class CheckResult:
    """Result of one property check."""

    name: str
    passed: bool
    severity: CheckSeverity
    message: str
    details: Dict[str, Any] = field(default_factory=dict)
    suggestions: List[str] = field(default_factory=list)
    elapsed: float = 0.0

    def __str__(self) -> str:
        status = "✓ PASS" if self.passed else "❌ FAIL"
        return f"{status} [{self.severity.value.upper()}] {self.name}: {self.message}"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "severity": self.severity.value,
            "message": self.message,
            "details": self.details,
            "suggestions": self.suggestions,
            "elapsed": self.elapsed,
        }


class PropertyCheck(ABC):
    """
    Base class for all property checks.

    Subclasses implement ``check`` and set ``name`` and ``severity``;
    ``run`` times the check, turns package errors into failed results and
    records the outcome.
    """

    name: str = "property"
    severity: CheckSeverity = CheckSeverity.HIGH

    def __init__(self, seed: int = 0, samples: Optional[int] = None, strict_mode: bool = True):
        """
        Initialize the check.

        Args:
            seed: Seed of the random generator used for sampled systems
            samples: Number of sampled systems (None keeps the check's default)
            strict_mode: If True, any failure fails the suite; otherwise
                only CRITICAL failures do
        """
        self.seed = seed
        self.samples = samples
        self.strict_mode = strict_mode
        self._history: List[CheckResult] = []

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)

    def count(self, default: int) -> int:
        return default if self.samples is None else self.samples

    @abstractmethod
    def check(self) -> CheckResult:
        """Run the property and return its result."""

    def result(self, passed: bool, message: str, **details: Any) -> CheckResult:
        return CheckResult(name=self.name, passed=passed, severity=self.severity, message=message, details=details)

    def run(self) -> CheckResult:
        logger = get_logger()
        start = time.perf_counter()
        try:
            result = self.check()
        except NonsmoothHopfError as e:
            result = self.result(False, f"{type(e).__name__}: {e.message}", **e.details)
        result.elapsed = time.perf_counter() - start
        logger.debug(f"{result} ({result.elapsed:.2f}s)")
        self.record(result)
        return result

    def should_fail(self, result: CheckResult) -> bool:
        if self.strict_mode:
            return not result.passed
        return not result.passed and result.severity == CheckSeverity.CRITICAL

    def record(self, result: CheckResult) -> None:
        self._history.append(result)

    def get_history(self) -> List[CheckResult]:
        return self._history.copy()

    def clear_history(self) -> None:
        self._history.clear()


class CheckSuite:
    """A list of checks run in order, with the worst failed severity as summary."""

    def __init__(self, checks: List[PropertyCheck], strict_mode: bool = True):
        self.checks = checks
        self.strict_mode = strict_mode
        self.results: List[CheckResult] = []

    def run(self) -> CheckResult:
        logger = get_logger()
        self.results = []
        for i, check in enumerate(self.checks, start=1):
            logger.workflow_step(i, len(self.checks), check.name)
            check.strict_mode = self.strict_mode
            self.results.append(check.run())

        failed = [r for r in self.results if not r.passed]
        blocking = [r for c, r in zip(self.checks, self.results) if c.should_fail(r)]
        if not failed:
            return CheckResult(
                name="suite", passed=True, severity=CheckSeverity.LOW,
                message="All property checks passed", details={"total_checks": len(self.results)},
            )
        worst = max((r.severity for r in failed), key=lambda s: s.rank)
        return CheckResult(
            name="suite",
            passed=not blocking,
            severity=worst,
            message=f"{len(failed)}/{len(self.results)} property checks failed",
            details={
                "total_checks": len(self.results),
                "failed_checks": len(failed),
                "failures": [str(r) for r in failed],
            },
            suggestions=["Rerun with --debug for the per-check logs"],
        )

    @property
    def passed(self) -> bool:
        return bool(self.results) and all(
            not c.should_fail(r) for c, r in zip(self.checks, self.results)
        )
