"""
Tests for layered settings: YAML defaults, config file, environment, flags.
"""

import os
import sys
import unittest

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config.settings import Settings, load_settings


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "override.yaml"
    path.write_text(
        "exact:\n"
        "  q_order: 5\n"
        "numeric:\n"
        "  q: \"0.1\"\n"
        "  tolerance: 1.0e-6\n",
        encoding="utf-8",
    )
    return str(path)


class TestDefaults(unittest.TestCase):

    def test_packaged_defaults(self):
        """The shipped YAML gives the documented defaults"""
        s = load_settings(environ={})
        self.assertEqual((s.q_order, s.t_band, s.z_order), (20, 20, 10))
        self.assertEqual((s.shift_q_order, s.shift_t_band), (12, 12))
        self.assertEqual(s.q, complex(0.2, 0.05))
        self.assertEqual(s.ts, (complex(1.4), complex(0.9, 0.28)))
        self.assertEqual(s.workers, 1)
        self.assertFalse(s.audit_enabled)

    def test_eval_config_mirrors_numeric_section(self):
        """Settings expose the numeric section as an EvalConfig"""
        cfg = load_settings(environ={}).eval_config()
        self.assertEqual(cfg.weight_cutoff, 60)
        self.assertEqual(cfg.max_cutoff, 400)
        self.assertEqual(cfg.tolerance, 1e-8)
        self.assertEqual(cfg.method, "transfer")


def test_config_file_layers_over_defaults(config_file):
    """A config file overrides only the keys it names"""
    s = load_settings(config_file, environ={})
    assert s.q_order == 5
    assert s.t_band == 20
    assert s.q == complex(0.1)
    assert s.tolerance == 1e-6


def test_environment_beats_file(config_file):
    """QTRACE_* variables override the config file"""
    env = {
        "QTRACE_Q_ORDER": "7",
        "QTRACE_TS": "1.5, 0.8+0.1i",
        "QTRACE_AUDIT_ENABLED": "1",
        "QTRACE_LOG_LEVEL": "debug",
    }
    s = load_settings(config_file, environ=env)
    assert s.q_order == 7
    assert s.ts == (complex(1.5), complex(0.8, 0.1))
    assert s.audit_enabled is True
    assert s.log_level == "debug"


def test_flags_beat_environment():
    """with_overrides applies non-None values only"""
    s = load_settings(environ={"QTRACE_Q_ORDER": "7"})
    flagged = s.with_overrides(q_order=3, t_band=None)
    assert flagged.q_order == 3
    assert flagged.t_band == s.t_band
    assert s.with_overrides() is s


def test_invalid_environment_value():
    """Unparseable environment values raise ValueError naming the variable"""
    with pytest.raises(ValueError, match="QTRACE_Q_ORDER"):
        load_settings(environ={"QTRACE_Q_ORDER": "many"})


def test_missing_config_file(tmp_path):
    """A --config path that does not exist is an error"""
    with pytest.raises(ValueError):
        load_settings(str(tmp_path / "absent.yaml"), environ={})


def test_non_mapping_config(tmp_path):
    """Config files must hold a mapping"""
    path = tmp_path / "list.yaml"
    path.write_text("- 1\n- 2\n", encoding="utf-8")
    with pytest.raises(ValueError):
        load_settings(str(path), environ={})


@pytest.mark.parametrize("field,value", [
    ("q_order", -1),
    ("workers", 0),
    ("log_level", "LOUD"),
    ("tolerance", 0.0),
    ("method", "guess"),
])
def test_validation(field, value):
    """Out-of-range settings are rejected"""
    with pytest.raises(ValueError):
        Settings(**{field: value})
