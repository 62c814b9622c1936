"""
Tests for reports, the suite registry and the suite runner.
"""

import os
import sys
import unittest

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import audit
from audit.store_jsonl import read_events
from config.settings import Settings
from partitions.strict import PartitionKind
from verification import registry
from verification.registry import SUITE_NAMES, SUITES, Check, get_suite
from verification.reports import CheckReport, SuiteResult
from verification.runner import run_suite

SMALL = Settings(q_order=6, t_band=6, z_order=3, shift_q_order=5, shift_t_band=5)


def explode(settings):
    raise RuntimeError("boom")


def always_passes(settings):
    return CheckReport(identity="trivial", passed=True, compared=1)


# ==============================================================================
# Reports
# ==============================================================================

class TestReports(unittest.TestCase):

    def test_residual_threshold(self):
        """Numeric reports pass iff residual <= tolerance"""
        self.assertTrue(CheckReport.from_residual("x", 1e-10, 1e-9).passed)
        self.assertFalse(CheckReport.from_residual("x", 1e-8, 1e-9).passed)

    def test_error_report(self):
        """Exceptions become failed reports carrying the error text"""
        report = CheckReport.from_error("x", ValueError("bad point"))
        self.assertFalse(report.passed)
        self.assertEqual(report.error, "ValueError: bad point")
        self.assertIn("error=ValueError", report.summary())

    def test_json_fields(self):
        """The machine contract names exactly these fields"""
        keys = set(CheckReport(identity="x").to_dict())
        self.assertEqual(keys, {"identity", "params", "residual", "pass", "cutoff", "mismatch", "error"})

    def test_suite_pass_flag(self):
        """A suite passes iff every report passes"""
        result = SuiteResult("s", [CheckReport("a", passed=True), CheckReport("b")])
        self.assertFalse(result.passed)
        self.assertEqual([r.identity for r in result.failures], ["b"])
        self.assertTrue(SuiteResult("empty").passed)
        self.assertNotIn("duration_s", result.to_dict())


# ==============================================================================
# Registry
# ==============================================================================

def test_suite_names():
    """The fixed registry"""
    assert set(SUITE_NAMES) == {
        "sp-exact", "osp-exact", "super-exact", "shift-exact",
        "numeric-1pt", "numeric-diff", "numeric-theta", "all",
    }


def test_unknown_suite():
    """Unknown suites raise KeyError"""
    with pytest.raises(KeyError):
        get_suite("bogus")


def test_all_subsumes_every_suite():
    """all runs every other suite's checks in registry order"""
    expected = [c.name for name in SUITE_NAMES if name != "all" for c in SUITES[name]]
    assert [c.name for c in SUITES["all"]] == expected


def test_check_names_unique():
    """No suite registers a name twice"""
    for name, checks in SUITES.items():
        names = [c.name for c in checks]
        assert len(names) == len(set(names)), name


def test_check_wraps_single_report():
    """Check.run always returns a list"""
    assert Check("t", always_passes).run(SMALL)[0].identity == "trivial"


# ==============================================================================
# Runner
# ==============================================================================

@pytest.mark.parametrize("suite", ["sp-exact", "osp-exact", "super-exact", "shift-exact"])
def test_exact_suites_pass_at_small_orders(suite):
    """Exact suites pass on small windows"""
    result = run_suite(suite, SMALL)
    assert result.passed, "\n".join(r.summary() for r in result.failures)
    assert result.reports


def test_numeric_diff_suite():
    """The numeric difference-equation suite passes at the default point"""
    result = run_suite("numeric-diff", SMALL)
    assert result.passed, "\n".join(r.summary() for r in result.failures)
    assert len(result.reports) == 12


def test_numeric_theta_suite():
    """B shift and triple product over the 5x5 grid"""
    result = run_suite("numeric-theta", SMALL)
    assert result.passed, "\n".join(r.summary() for r in result.failures)
    assert sum(r.identity == "b_shift" for r in result.reports) == 25


def test_raising_check_becomes_failure(monkeypatch):
    """A check that raises fails without aborting the suite"""
    monkeypatch.setitem(SUITES, "test-mixed", [Check("explode", explode), Check("fine", always_passes)])
    result = run_suite("test-mixed", SMALL)
    assert [r.identity for r in result.reports] == ["explode", "trivial"]
    assert result.reports[0].error == "RuntimeError: boom"
    assert result.reports[1].passed
    assert not result.passed


def test_workers_keep_registry_order():
    """Worker pools return reports in registry order"""
    serial = run_suite("shift-exact", SMALL)
    pooled = run_suite("shift-exact", SMALL.with_overrides(workers=2))
    assert [r.to_dict() for r in pooled.reports] == [r.to_dict() for r in serial.reports]


def test_audited_run(monkeypatch, tmp_path):
    """An audited run emits start, one event per report and finish"""
    monkeypatch.setitem(SUITES, "test-mixed", [Check("explode", explode), Check("fine", always_passes)])
    settings = SMALL.with_overrides(audit_enabled=True, audit_dir=str(tmp_path))
    try:
        run_suite("test-mixed", settings)
        run_id = audit.get_run_id()
        types = [e["event_type"] for e in reversed(read_events(run_id=run_id))]
    finally:
        audit.configure()
    assert types == ["suite_started", "check_completed", "check_completed", "suite_finished"]


def test_registry_module_exposes_checks():
    """Registered callables are module-level functions (picklable for workers)"""
    for check in SUITES["all"]:
        assert getattr(registry, check.fn.__name__) is check.fn


def test_shift_checks_use_shift_orders():
    """Shift checks compare on the shift window, not the exact one"""
    settings = Settings(q_order=2, t_band=2, z_order=1, shift_q_order=5, shift_t_band=4)
    report = registry.shift_exact(settings, PartitionKind.STRICT, False)
    assert report.passed, report.summary()
    assert report.params["window"] == {"q_max": 5, "t_band": {"t": 4}, "z_max": 0}
