"""
Tests for the audit trail: event fan-out, check rows and rollups.
"""

import json
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import audit
from audit.events import emit_event, record_check
from audit.rollup import compute_rollup
from audit.store_jsonl import jsonl_path, read_events
from audit.store_sqlite import get_latest_rollup, query_check_results, query_events
from verification.reports import CheckReport


# ==============================================================================
# Fixtures
# ==============================================================================

@pytest.fixture
def audit_dir(tmp_path):
    """Point both stores at a temporary directory for one test"""
    path = audit.configure(str(tmp_path / "audit"))
    yield path
    audit.configure()


def passing(identity="lemma_row_sums[strict,k=1]"):
    return CheckReport(identity=identity, passed=True, compared=12)


def failing(identity="quasi_periodicity[R]"):
    return CheckReport.from_residual(identity, 1e-3, 1e-9, cutoff=80)


# ==============================================================================
# Run ids
# ==============================================================================

def test_run_id_is_pinned():
    """set_run_id pins the id returned by later get_run_id calls"""
    run_id = audit.set_run_id("fixed-run")
    assert run_id == "fixed-run"
    assert audit.get_run_id() == "fixed-run"
    assert audit.set_run_id() != "fixed-run"


# ==============================================================================
# Stores
# ==============================================================================

def test_event_reaches_both_stores(audit_dir):
    """emit_event writes one JSONL line and one SQLite row"""
    run_id = audit.set_run_id()
    emit_event("suite_started", {"suite": "sp-exact", "checks": 3})

    lines = open(jsonl_path(), encoding="utf-8").read().splitlines()
    assert len(lines) == 1
    assert json.loads(lines[0])["payload"]["suite"] == "sp-exact"

    rows = query_events(run_id=run_id)
    assert [r["event_type"] for r in rows] == ["suite_started"]


def test_read_events_filters(audit_dir):
    """JSONL reads filter by type and run, most recent first"""
    audit.set_run_id("run-a")
    emit_event("suite_started", {"suite": "numeric-1pt"})
    emit_event("suite_finished", {"suite": "numeric-1pt"})
    audit.set_run_id("run-b")
    emit_event("suite_started", {"suite": "numeric-diff"})

    assert len(read_events(run_id="run-a")) == 2
    started = read_events(event_type="suite_started")
    assert [e["payload"]["suite"] for e in started] == ["numeric-diff", "numeric-1pt"]


def test_unknown_event_type_is_still_written(audit_dir):
    """Unknown types log a warning but are stored"""
    audit.set_run_id()
    emit_event("something_else", {})
    assert read_events(event_type="something_else")


def test_record_check(audit_dir):
    """record_check stores a structured check_results row"""
    audit.set_run_id("run-c")
    record_check("numeric-1pt", failing(), 0.25)
    rows = query_check_results()
    assert len(rows) == 1
    row = rows[0]
    assert row["run_id"] == "run-c"
    assert row["identity"] == "quasi_periodicity[R]"
    assert row["passed"] == 0
    assert row["residual"] == pytest.approx(1e-3)
    assert row["cutoff"] == 80
    assert read_events(event_type="check_completed")[0]["payload"]["suite"] == "numeric-1pt"


def test_store_failures_are_swallowed(tmp_path):
    """An unwritable audit directory never raises into the caller"""
    blocker = tmp_path / "not-a-dir"
    blocker.write_text("x", encoding="utf-8")
    audit.configure(str(blocker))
    try:
        emit_event("suite_started", {})
        record_check("sp-exact", passing(), 0.1)
    finally:
        audit.configure()


def test_missing_jsonl_reads_empty(audit_dir):
    """No log file yet means no events"""
    assert read_events() == []


# ==============================================================================
# Rollups
# ==============================================================================

def test_rollup_aggregates(audit_dir):
    """Pass rates per suite and per identity"""
    audit.set_run_id("run-1")
    record_check("sp-exact", passing(), 0.1)
    record_check("sp-exact", passing("euler_identity"), 0.2)
    audit.set_run_id("run-2")
    record_check("numeric-1pt", failing(), 0.3)

    metrics = compute_rollup()
    assert metrics["total_runs"] == 2
    assert metrics["total_checks"] == 3
    assert metrics["passed"] == 2
    assert metrics["pass_rate"] == pytest.approx(0.6667)
    assert metrics["by_suite"]["sp-exact"] == {"total": 2, "passed": 2, "failed": 0, "pass_rate": 1.0}
    assert metrics["by_identity"]["quasi_periodicity[R]"]["failed"] == 1
    assert metrics["total_duration_s"] == pytest.approx(0.6)

    latest = get_latest_rollup()
    assert latest["metrics"]["total_checks"] == 3


def test_rollup_of_empty_window(audit_dir):
    """A window with no checks reports zeros"""
    metrics = compute_rollup("2000-01-01T00:00:00Z", "2000-01-02T00:00:00Z")
    assert metrics["total_checks"] == 0
    assert metrics["pass_rate"] == 0.0
    assert metrics["period"] == {"start": "2000-01-01T00:00:00Z", "end": "2000-01-02T00:00:00Z"}
