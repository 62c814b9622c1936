"""
config/settings.py
Layered settings: packaged YAML defaults, an optional YAML file,
QTRACE_* environment variables, then command-line overrides.
"""

import logging
import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple

import yaml

from numeric.evaluation import EvalConfig, parse_complex

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = Path(__file__).parent / "verify_config.yaml"
ENV_PREFIX = "QTRACE_"

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


@dataclass(frozen=True)
class Settings:
    """Resolved run settings. Orders are non-negative, tolerances positive."""
    q_order: int = 20
    t_band: int = 20
    z_order: int = 10
    shift_q_order: int = 12
    shift_t_band: int = 12
    q: complex = complex(0.2, 0.05)
    ts: Tuple[complex, ...] = (complex(1.4), complex(0.9, 0.28))
    tolerance: float = 1e-8
    weight_cutoff: int = 60
    max_cutoff: int = 400
    tail_tol: float = 1e-12
    annulus_guard: float = 1e-3
    pole_epsilon: float = 1e-4
    method: str = "transfer"
    adaptive: bool = True
    workers: int = 1
    audit_enabled: bool = False
    audit_dir: str = "./data/audit"
    log_level: str = "INFO"

    def __post_init__(self):
        for name in ("q_order", "t_band", "z_order", "shift_q_order", "shift_t_band"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative, got {getattr(self, name)}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        if self.log_level.upper() not in LOG_LEVELS:
            raise ValueError(f"unknown log level {self.log_level!r}")
        # raises on bad numeric values
        self.eval_config()

    def eval_config(self) -> EvalConfig:
        return EvalConfig(
            weight_cutoff=self.weight_cutoff,
            tail_tol=self.tail_tol,
            annulus_guard=self.annulus_guard,
            max_cutoff=self.max_cutoff,
            adaptive=self.adaptive,
            method=self.method,
            tolerance=self.tolerance,
            pole_epsilon=self.pole_epsilon,
        )

    def with_overrides(self, **overrides) -> "Settings":
        """Apply non-None overrides (command-line flags)."""
        changes = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, **changes) if changes else self


# ── Loading ───────────────────────────────────────────────────

def _read_yaml(path: Path) -> Dict[str, Any]:
    with open(path, "r", encoding="utf-8") as f:
        data = yaml.safe_load(f) or {}
    if not isinstance(data, dict):
        raise ValueError(f"config file {path} must contain a mapping")
    return data


def _merge(base: Dict[str, Any], update: Mapping[str, Any]) -> Dict[str, Any]:
    out = dict(base)
    for key, value in update.items():
        if isinstance(value, Mapping) and isinstance(out.get(key), Mapping):
            out[key] = _merge(out[key], value)
        else:
            out[key] = value
    return out


def _flatten(data: Mapping[str, Any]) -> Dict[str, Any]:
    """Map the sectioned YAML layout onto Settings field names."""
    exact = data.get("exact", {}) or {}
    shift = data.get("shift", {}) or {}
    numeric = data.get("numeric", {}) or {}
    run = data.get("run", {}) or {}
    audit = data.get("audit", {}) or {}
    logging_cfg = data.get("logging", {}) or {}

    flat: Dict[str, Any] = {
        "q_order": exact.get("q_order"),
        "t_band": exact.get("t_band"),
        "z_order": exact.get("z_order"),
        "shift_q_order": shift.get("q_order"),
        "shift_t_band": shift.get("t_band"),
        "tolerance": numeric.get("tolerance"),
        "weight_cutoff": numeric.get("weight_cutoff"),
        "max_cutoff": numeric.get("max_cutoff"),
        "tail_tol": numeric.get("tail_tol"),
        "annulus_guard": numeric.get("annulus_guard"),
        "pole_epsilon": numeric.get("pole_epsilon"),
        "method": numeric.get("method"),
        "adaptive": numeric.get("adaptive"),
        "workers": run.get("workers"),
        "audit_enabled": audit.get("enabled"),
        "audit_dir": audit.get("dir"),
        "log_level": logging_cfg.get("level"),
    }
    if "q" in numeric:
        flat["q"] = parse_complex(str(numeric["q"]))
    if "ts" in numeric:
        flat["ts"] = tuple(parse_complex(str(t)) for t in numeric["ts"])
    return {k: v for k, v in flat.items() if v is not None}


def _parse_bool(value: str) -> bool:
    return value.lower() in ("true", "1", "yes")


_ENV_FIELDS = {
    "Q_ORDER": ("q_order", int),
    "T_BAND": ("t_band", int),
    "Z_ORDER": ("z_order", int),
    "SHIFT_Q_ORDER": ("shift_q_order", int),
    "SHIFT_T_BAND": ("shift_t_band", int),
    "Q": ("q", parse_complex),
    "TS": ("ts", lambda v: tuple(parse_complex(t) for t in v.split(","))),
    "TOLERANCE": ("tolerance", float),
    "WEIGHT_CUTOFF": ("weight_cutoff", int),
    "MAX_CUTOFF": ("max_cutoff", int),
    "TAIL_TOL": ("tail_tol", float),
    "METHOD": ("method", str),
    "WORKERS": ("workers", int),
    "AUDIT_ENABLED": ("audit_enabled", _parse_bool),
    "AUDIT_DIR": ("audit_dir", str),
    "LOG_LEVEL": ("log_level", str),
}


def _from_env(environ: Mapping[str, str]) -> Dict[str, Any]:
    out = {}
    for suffix, (name, convert) in _ENV_FIELDS.items():
        raw = environ.get(ENV_PREFIX + suffix)
        if raw is None:
            continue
        try:
            out[name] = convert(raw)
        except ValueError:
            raise ValueError(f"invalid value for {ENV_PREFIX}{suffix}: {raw!r}")
    return out


def load_settings(config_path: Optional[str] = None,
                  environ: Optional[Mapping[str, str]] = None) -> Settings:
    """
    Resolve settings from the packaged defaults, an optional YAML file and
    the environment. Command-line values are applied by the caller through
    Settings.with_overrides.

    Raises:
        ValueError: unreadable file or invalid value.
    """
    data = _read_yaml(DEFAULT_CONFIG_PATH)
    if config_path:
        path = Path(config_path)
        if not path.exists():
            raise ValueError(f"config file not found: {config_path}")
        data = _merge(data, _read_yaml(path))
        logger.debug("merged config file %s", path)

    values = _flatten(data)
    values.update(_from_env(os.environ if environ is None else environ))
    return Settings(**values)
