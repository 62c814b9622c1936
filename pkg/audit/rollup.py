"""
audit/rollup.py
Rollup of verification runs: pass rates per suite and per identity over a
time window, read from the check_results table.
"""

import logging
from datetime import datetime, timedelta

from audit.store_sqlite import query_check_results, upsert_rollup

logger = logging.getLogger(__name__)


def _rate(num, denom):
    return round(num / denom, 4) if denom > 0 else 0.0


def _tally(rows, key):
    out = {}
    for r in rows:
        name = r.get(key) or "unknown"
        entry = out.setdefault(name, {"total": 0, "passed": 0})
        entry["total"] += 1
        if r.get("passed"):
            entry["passed"] += 1
    for entry in out.values():
        entry["failed"] = entry["total"] - entry["passed"]
        entry["pass_rate"] = _rate(entry["passed"], entry["total"])
    return dict(sorted(out.items()))


def compute_rollup(start_date=None, end_date=None):
    """
    Compute rollup metrics for the given window.

    Args:
        start_date: ISO date string (inclusive). Defaults to 7 days ago.
        end_date:   ISO date string (exclusive). Defaults to now.

    Returns:
        dict with rollup metrics.
    """
    now = datetime.utcnow()
    if not end_date:
        end_date = now.isoformat() + "Z"
    if not start_date:
        start_date = (now - timedelta(days=7)).isoformat() + "Z"

    rows = query_check_results(since=start_date, until=end_date)
    runs = {r["run_id"] for r in rows}
    passed = sum(1 for r in rows if r.get("passed"))
    durations = [r["duration_s"] for r in rows if r.get("duration_s") is not None]

    metrics = {
        "period": {"start": start_date, "end": end_date},
        "total_runs": len(runs),
        "total_checks": len(rows),
        "passed": passed,
        "failed": len(rows) - passed,
        "pass_rate": _rate(passed, len(rows)),
        "total_duration_s": round(sum(durations), 3),
        "by_suite": _tally(rows, "suite"),
        "by_identity": _tally(rows, "identity"),
    }

    try:
        upsert_rollup(
            period_start=start_date,
            period_end=end_date,
            generated_at=datetime.utcnow().isoformat() + "Z",
            metrics=metrics,
        )
    except Exception as e:
        logger.error("Failed to persist rollup: %s", e)

    return metrics
