"""
Verify command implementation.

Runs the property suite and fails the process when a blocking check fails.
"""

from typing import TYPE_CHECKING, Optional

from rich.table import Table

from ...utils.exceptions import VerificationError
from ...verification import full_suite, quick_suite
from ..io import emit_json

if TYPE_CHECKING:
    from ...utils import Config, HopfLogger


def run_verify(
    output: Optional[str],
    seed: int,
    quick: bool,
    strict: bool,
    config: "Config",
    logger: "HopfLogger",
) -> None:
    build = quick_suite if quick else full_suite
    suite = build(seed=seed, config=config, strict_mode=strict)
    summary = suite.run()

    table = Table(title="Property checks")
    table.add_column("Check")
    table.add_column("Result")
    table.add_column("Severity")
    table.add_column("Time [s]", justify="right")
    for result in suite.results:
        status = "[success]PASS[/success]" if result.passed else "[error]FAIL[/error]"
        table.add_row(result.name, status, result.severity.value, f"{result.elapsed:.2f}")
    logger.console.print(table)

    emit_json(
        {"summary": summary.to_dict(), "checks": [r.to_dict() for r in suite.results], "seed": seed},
        output,
        config,
    )
    if not suite.passed:
        raise VerificationError(summary.message, details=summary.details)
    logger.success(summary.message)
