"""
audit/__init__.py
Run-ID generation and the audit directory shared by both stores.
"""

import os
import uuid

DEFAULT_AUDIT_DIR = os.path.join(
    os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
    "data",
    "audit",
)

_RUN_ID = None
_AUDIT_DIR = DEFAULT_AUDIT_DIR


def generate_run_id():
    """Generate a unique id for one verify invocation."""
    return str(uuid.uuid4())


def get_run_id():
    """Return the current run id, starting a run if none is pinned."""
    global _RUN_ID
    if _RUN_ID is None:
        _RUN_ID = generate_run_id()
    return _RUN_ID


def set_run_id(run_id=None):
    """Pin a run id (call once at the start of a suite run)."""
    global _RUN_ID
    _RUN_ID = run_id or generate_run_id()
    return _RUN_ID


def configure(audit_dir=None):
    """Point both stores at `audit_dir` (default: data/audit under the repo)."""
    global _AUDIT_DIR
    _AUDIT_DIR = os.path.abspath(audit_dir) if audit_dir else DEFAULT_AUDIT_DIR
    return _AUDIT_DIR


def get_audit_dir():
    return _AUDIT_DIR
