"""
verification/runner.py
Runs a registered suite, optionally across worker processes, and collects
reports in registry order.
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from typing import List, Tuple

import audit
from audit.events import emit_event, record_check
from config.settings import Settings
from verification.registry import Check, get_suite
from verification.reports import CheckReport, SuiteResult

logger = logging.getLogger(__name__)


def _execute(check: Check, settings: Settings) -> Tuple[List[CheckReport], float]:
    """Run one check; a raising check becomes a single failed report."""
    start = time.perf_counter()
    try:
        reports = check.run(settings)
    except Exception as e:
        logger.exception("check %s raised", check.name)
        reports = [CheckReport.from_error(check.name, e)]
    return reports, time.perf_counter() - start


def run_suite(name: str, settings: Settings) -> SuiteResult:
    """
    Run every check of suite `name` and return the collected SuiteResult.

    Output order is the registry order regardless of worker count. When
    auditing is enabled each report is recorded under a fresh run id.

    Raises:
        KeyError: unknown suite name.
    """
    checks = get_suite(name)
    started = time.perf_counter()

    if settings.audit_enabled:
        audit.configure(settings.audit_dir)
        run_id = audit.set_run_id()
        emit_event("suite_started", {"suite": name, "checks": len(checks)})
        logger.info("audit run %s for suite %s", run_id, name)

    if settings.workers > 1 and len(checks) > 1:
        with ProcessPoolExecutor(max_workers=settings.workers) as pool:
            outcomes = list(pool.map(_execute, checks, [settings] * len(checks)))
    else:
        outcomes = [_execute(check, settings) for check in checks]

    result = SuiteResult(suite=name)
    for check, (reports, duration) in zip(checks, outcomes):
        share = duration / max(len(reports), 1)
        for report in reports:
            logger.info("%s (%.3fs)", report.summary(), share)
            if settings.audit_enabled:
                record_check(name, report, share)
        result.reports.extend(reports)
    result.duration_s = time.perf_counter() - started

    if settings.audit_enabled:
        emit_event("suite_finished", {
            "suite": name,
            "passed": result.passed,
            "reports": len(result.reports),
            "failures": len(result.failures),
            "duration_s": round(result.duration_s, 3),
        })

    logger.info(
        "suite %s: %d reports, %d failed, %.2fs",
        name, len(result.reports), len(result.failures), result.duration_s,
    )
    return result
