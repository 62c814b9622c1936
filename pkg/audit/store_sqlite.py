"""
audit/store_sqlite.py
SQLite-backed structured audit storage.
Tables: audit_events, check_results, rollups.
All DDL uses CREATE TABLE IF NOT EXISTS.
"""

import json
import logging
import os
import sqlite3

from audit import get_audit_dir

logger = logging.getLogger(__name__)

DB_NAME = "audit.db"


def db_path():
    return os.path.join(get_audit_dir(), DB_NAME)


def _get_conn():
    """Return a new SQLite connection with WAL mode for concurrent reads."""
    os.makedirs(get_audit_dir(), exist_ok=True)
    conn = sqlite3.connect(db_path(), timeout=5)
    conn.execute("PRAGMA journal_mode=WAL")
    conn.row_factory = sqlite3.Row
    return conn


def _ensure_tables(conn):
    """Create tables if they don't exist. Idempotent."""
    conn.executescript("""
        CREATE TABLE IF NOT EXISTS audit_events (
            id          INTEGER PRIMARY KEY AUTOINCREMENT,
            run_id      TEXT NOT NULL,
            event_type  TEXT NOT NULL,
            timestamp   TEXT NOT NULL,
            payload     TEXT NOT NULL DEFAULT '{}'
        );

        CREATE INDEX IF NOT EXISTS idx_ae_run
            ON audit_events(run_id);
        CREATE INDEX IF NOT EXISTS idx_ae_type_ts
            ON audit_events(event_type, timestamp);

        CREATE TABLE IF NOT EXISTS check_results (
            id          INTEGER PRIMARY KEY AUTOINCREMENT,
            run_id      TEXT NOT NULL,
            timestamp   TEXT NOT NULL,
            suite       TEXT NOT NULL,
            identity    TEXT NOT NULL,
            passed      INTEGER NOT NULL DEFAULT 0,
            residual    REAL,
            cutoff      INTEGER,
            duration_s  REAL
        );

        CREATE INDEX IF NOT EXISTS idx_cr_run
            ON check_results(run_id);
        CREATE INDEX IF NOT EXISTS idx_cr_ts
            ON check_results(timestamp);

        CREATE TABLE IF NOT EXISTS rollups (
            id              INTEGER PRIMARY KEY AUTOINCREMENT,
            period_start    TEXT NOT NULL,
            period_end      TEXT NOT NULL,
            generated_at    TEXT NOT NULL,
            metrics         TEXT NOT NULL DEFAULT '{}'
        );

        CREATE UNIQUE INDEX IF NOT EXISTS idx_ru_period
            ON rollups(period_start, period_end);
    """)


_ENSURED_FOR = set()


def _conn_with_tables():
    """Return a connection with tables guaranteed to exist."""
    conn = _get_conn()
    path = db_path()
    if path not in _ENSURED_FOR:
        _ensure_tables(conn)
        _ENSURED_FOR.add(path)
    return conn


# ── Public API ────────────────────────────────────────────────

def insert_event(event):
    """Insert a single audit event row."""
    conn = _conn_with_tables()
    try:
        conn.execute(
            "INSERT INTO audit_events (run_id, event_type, timestamp, payload) "
            "VALUES (?, ?, ?, ?)",
            (
                event["run_id"],
                event["event_type"],
                event["timestamp"],
                json.dumps(event.get("payload", {})),
            ),
        )
        conn.commit()
    finally:
        conn.close()


def insert_check_result(row):
    """Insert one check_results row."""
    conn = _conn_with_tables()
    try:
        conn.execute(
            "INSERT INTO check_results "
            "(run_id, timestamp, suite, identity, passed, residual, cutoff, duration_s) "
            "VALUES (?, ?, ?, ?, ?, ?, ?, ?)",
            (
                row["run_id"],
                row["timestamp"],
                row["suite"],
                row["identity"],
                int(bool(row.get("passed"))),
                row.get("residual"),
                row.get("cutoff"),
                row.get("duration_s"),
            ),
        )
        conn.commit()
    finally:
        conn.close()


def upsert_rollup(period_start, period_end, generated_at, metrics):
    """Insert or replace a rollup row."""
    conn = _conn_with_tables()
    try:
        conn.execute(
            "INSERT OR REPLACE INTO rollups "
            "(period_start, period_end, generated_at, metrics) "
            "VALUES (?, ?, ?, ?)",
            (period_start, period_end, generated_at, json.dumps(metrics)),
        )
        conn.commit()
    finally:
        conn.close()


def _where(*conditions):
    """Build a WHERE clause from (sql, value) pairs whose value is set."""
    active = [(sql, value) for sql, value in conditions if value]
    if not active:
        return "", []
    return " WHERE " + " AND ".join(sql for sql, _ in active), [v for _, v in active]


def query_events(event_type=None, since=None, run_id=None, limit=500):
    """Audit events matching every given filter, newest first."""
    where, params = _where(
        ("event_type = ?", event_type),
        ("timestamp >= ?", since),
        ("run_id = ?", run_id),
    )
    conn = _conn_with_tables()
    try:
        rows = conn.execute(
            f"SELECT * FROM audit_events{where} ORDER BY id DESC LIMIT ?",
            params + [limit],
        ).fetchall()
        return [dict(r) for r in rows]
    finally:
        conn.close()


def query_check_results(since=None, until=None, limit=100000):
    """check_results rows with since <= timestamp < until, newest first."""
    where, params = _where(("timestamp >= ?", since), ("timestamp < ?", until))
    conn = _conn_with_tables()
    try:
        rows = conn.execute(
            f"SELECT * FROM check_results{where} ORDER BY id DESC LIMIT ?",
            params + [limit],
        ).fetchall()
        return [dict(r) for r in rows]
    finally:
        conn.close()


def get_latest_rollup():
    """Most recent rollup with decoded metrics, or None."""
    conn = _conn_with_tables()
    try:
        row = conn.execute("SELECT * FROM rollups ORDER BY id DESC LIMIT 1").fetchone()
    finally:
        conn.close()
    if row is None:
        return None
    return dict(row, metrics=json.loads(row["metrics"]))
