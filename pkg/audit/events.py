"""
audit/events.py
Central event emitter with fan-out to SQLite + JSONL stores.
All failures are swallowed; auditing never blocks a verification run.
"""

import logging
from datetime import datetime

from audit import get_run_id

logger = logging.getLogger(__name__)

# ── Canonical event types ─────────────────────────────────────
EVENT_TYPES = {
    "suite_started",
    "check_completed",
    "suite_finished",
}


def emit_event(event_type, payload=None):
    """
    Emit an audit event to all registered stores.

    Args:
        event_type: One of EVENT_TYPES (unknown types are still written).
        payload: dict of event-specific data.

    Returns:
        The run_id used for the event.
    """
    run_id = get_run_id()
    timestamp = datetime.utcnow().isoformat() + "Z"

    if event_type not in EVENT_TYPES:
        logger.warning("Unknown audit event type: %s", event_type)

    event = {
        "run_id": run_id,
        "event_type": event_type,
        "timestamp": timestamp,
        "payload": payload or {},
    }

    _fan_out(event)
    return run_id


def record_check(suite, report, duration_s):
    """
    Emit check_completed and store the structured check_results row.

    Args:
        suite: suite name the check ran under.
        report: CheckReport of the check.
        duration_s: wall-clock seconds spent on the check.
    """
    payload = dict(report.to_dict(), suite=suite, duration_s=round(duration_s, 6))
    emit_event("check_completed", payload)
    try:
        from audit.store_sqlite import insert_check_result
        insert_check_result({
            "run_id": get_run_id(),
            "timestamp": datetime.utcnow().isoformat() + "Z",
            "suite": suite,
            "identity": report.identity,
            "passed": report.passed,
            "residual": report.residual,
            "cutoff": report.cutoff,
            "duration_s": duration_s,
        })
    except Exception as e:
        logger.error("audit/store_sqlite check_results write failed: %s", e)


def _fan_out(event):
    """Write event to SQLite and JSONL. Each store fails independently."""
    try:
        from audit.store_sqlite import insert_event
        insert_event(event)
    except Exception as e:
        logger.error("audit/store_sqlite write failed: %s", e)

    try:
        from audit.store_jsonl import append_event
        append_event(event)
    except Exception as e:
        logger.error("audit/store_jsonl write failed: %s", e)
