"""
cli_rollup.py
CLI entrypoint for rolling up audited verification runs.

Usage:
    python cli_rollup.py                    # Default: last 7 days
    python cli_rollup.py --start 2026-01-01 --end 2026-01-08
    python cli_rollup.py --audit-dir ./data/audit
"""

import argparse
import json
import sys

from dotenv import load_dotenv

import audit
from audit.rollup import compute_rollup


def main(argv=None):
    load_dotenv()
    parser = argparse.ArgumentParser(description="Roll up audited verification runs")
    parser.add_argument("--start", help="Start date (ISO format)", default=None)
    parser.add_argument("--end", help="End date (ISO format)", default=None)
    parser.add_argument("--audit-dir", help="Audit directory", default=None)
    args = parser.parse_args(argv)

    audit.configure(args.audit_dir)
    print("Computing rollup...", file=sys.stderr)
    metrics = compute_rollup(start_date=args.start, end_date=args.end)
    print(json.dumps(metrics, indent=2))
    print("Rollup persisted to SQLite.", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
