"""
cli.py
Command-line entry point for the verification engine.

Usage:
    python cli.py verify --suite sp-exact --q-order 20 --t-band 20
    python cli.py verify --suite numeric-diff --q 0.2+0.05i --t 1.4 --t 0.9+0.28i --tol 1e-8
    python cli.py series --target nr --q-order 3 --format csv
    python cli.py eval --func R --q 0 --t 2
    python cli.py eval --func theta --j 0 --q 0.1 --t 1
    python cli.py partitions --kind strict --max-weight 5 --count

Exit codes: 0 all checks pass, 1 a check failed, 2 usage error.
"""

import argparse
import csv
import io
import json
import logging
import sys
from contextlib import contextmanager

from dotenv import load_dotenv

from config.settings import LOG_LEVELS, load_settings
from correlators.targets import TARGETS, get_target
from numeric.evaluation import (
    FUNCTIONS,
    METHODS,
    EvaluationError,
    eval_correlator,
    format_complex,
    parse_complex,
)
from numeric.theta import ROUTES, THETA_ROUTE, b_function, theta
from partitions.strict import PartitionKind, count_table, enumerate_partitions
from ring import codec
from verification.registry import SUITE_NAMES
from verification.runner import run_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

FORMATS = ("text", "json", "csv")
EVAL_FUNCS = tuple(FUNCTIONS) + ("theta", "B")


class UsageError(ValueError):
    """Invalid flag combination or value; maps to exit code 2."""


def _complex_arg(text):
    try:
        return parse_complex(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


# =========================
# Parser
# =========================

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML file layered over the packaged defaults")
    common.add_argument("--log-level", choices=LOG_LEVELS, type=str.upper)
    common.add_argument("--output", help="write results here instead of stdout")
    common.add_argument("--format", choices=FORMATS, default="text")

    orders = argparse.ArgumentParser(add_help=False)
    orders.add_argument("--q-order", type=int)
    orders.add_argument("--t-band", type=int)
    orders.add_argument("--z-order", type=int)

    point = argparse.ArgumentParser(add_help=False)
    point.add_argument("--q", type=_complex_arg)
    point.add_argument("--t", type=_complex_arg, action="append", dest="ts")
    point.add_argument("--cutoff", type=int, help="starting weight cutoff")
    point.add_argument("--method", choices=METHODS)

    parser = argparse.ArgumentParser(
        prog="qtrace", description="Exact and numeric checks of strict-partition trace correlators"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", parents=[common, orders, point], help="run an identity suite")
    verify.add_argument("--suite", choices=SUITE_NAMES, default="all")
    verify.add_argument("--tol", type=float)
    verify.add_argument("--workers", type=int)
    verify.add_argument("--audit", action="store_true", help="record the run in the audit stores")

    series = sub.add_parser("series", parents=[common, orders], help="emit an exact series")
    series.add_argument("--target", choices=tuple(TARGETS), required=True)

    ev = sub.add_parser("eval", parents=[common, point], help="evaluate a function numerically")
    ev.add_argument("--func", choices=EVAL_FUNCS, required=True)
    ev.add_argument("--j", type=int, default=0, help="theta index (0 or 1)")
    ev.add_argument("--route", choices=ROUTES, default=THETA_ROUTE)

    parts = sub.add_parser("partitions", parents=[common], help="list or count partitions")
    parts.add_argument("--kind", choices=[k.value for k in PartitionKind], default="strict")
    parts.add_argument("--max-weight", type=int, required=True)
    parts.add_argument("--count", action="store_true", help="print weight,count rows")

    return parser


def _settings(args):
    """Resolve settings: YAML defaults, --config, QTRACE_* env, then flags."""
    overrides = {
        "q_order": getattr(args, "q_order", None),
        "t_band": getattr(args, "t_band", None),
        "z_order": getattr(args, "z_order", None),
        "q": getattr(args, "q", None),
        "ts": tuple(args.ts) if getattr(args, "ts", None) else None,
        "tolerance": getattr(args, "tol", None),
        "method": getattr(args, "method", None),
        "workers": getattr(args, "workers", None),
        "log_level": args.log_level,
    }
    if getattr(args, "audit", False):
        overrides["audit_enabled"] = True
    cutoff = getattr(args, "cutoff", None)
    settings = load_settings(args.config)
    if cutoff is not None:
        overrides["weight_cutoff"] = cutoff
        overrides["max_cutoff"] = max(settings.max_cutoff, cutoff)
    return settings.with_overrides(**overrides)


@contextmanager
def _sink(path):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as f:
            yield f
    else:
        yield sys.stdout


# =========================
# Subcommands
# =========================

def run_verify(args, settings, out) -> int:
    result = run_suite(args.suite, settings)
    if args.format == "json":
        out.write(json.dumps(result.to_dict(), indent=2) + "\n")
    elif args.format == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["identity", "pass", "residual", "cutoff", "error"])
        for r in result.reports:
            writer.writerow([r.identity, int(r.passed), r.residual, r.cutoff, r.error or ""])
    else:
        for r in result.reports:
            out.write(r.summary() + "\n")
        status = "PASS" if result.passed else "FAIL"
        out.write(f"{status}: {len(result.reports) - len(result.failures)}/{len(result.reports)} "
                  f"checks passed in suite {result.suite}\n")
    return EXIT_OK if result.passed else EXIT_FAILED


def run_series(args, settings, out) -> int:
    target = get_target(args.target)
    series = target.build(settings.q_order, settings.t_band, settings.z_order)
    if args.format == "json":
        out.write(codec.to_json(series, indent=2) + "\n")
    elif args.format == "csv":
        out.write(codec.to_csv(series))
    else:
        out.write(codec.to_text(series))
    return EXIT_OK


def run_eval(args, settings, out) -> int:
    if args.q is None:
        raise UsageError("eval needs --q")
    ts = list(args.ts or [])
    cfg = settings.eval_config()
    if args.func == "theta":
        if len(ts) != 1:
            raise UsageError("theta takes exactly one --t")
        value = theta(args.j, args.q, ts[0], cutoff=args.cutoff)
        payload = {"func": "theta", "j": args.j, "value": format_complex(value)}
    elif args.func == "B":
        if len(ts) != 1:
            raise UsageError("B takes exactly one --t")
        value = b_function(args.q, ts[0], cfg, route=args.route)
        payload = {"func": "B", "route": args.route, "value": format_complex(value)}
    else:
        evaluation = eval_correlator(args.func, args.q, ts, cfg)
        payload = {
            "func": args.func,
            "value": format_complex(evaluation.value),
            "cutoff": evaluation.cutoff,
            "tail": evaluation.tail,
            "method": evaluation.method,
        }
    if args.format == "json":
        out.write(json.dumps(payload) + "\n")
    else:
        out.write(payload["value"] + "\n")
    return EXIT_OK


def run_partitions(args, settings, out) -> int:
    if args.max_weight < 0:
        raise UsageError("--max-weight must be non-negative")
    kind = PartitionKind(args.kind)
    if args.count:
        rows = [[n, c] for n, c in enumerate(count_table(kind, args.max_weight))]
        if args.format == "json":
            out.write(json.dumps([{"weight": n, "count": c} for n, c in rows]) + "\n")
            return EXIT_OK
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        out.write(buf.getvalue())
        return EXIT_OK

    partitions = list(enumerate_partitions(kind, args.max_weight))
    if args.format == "json":
        out.write(json.dumps([{"weight": p.weight, "parts": list(p.parts)} for p in partitions]) + "\n")
        return EXIT_OK
    # one partition per line, parts comma-separated; the empty partition is an empty line
    for p in partitions:
        out.write(f"{p}\n")
    return EXIT_OK


COMMANDS = {
    "verify": run_verify,
    "series": run_series,
    "eval": run_eval,
    "partitions": run_partitions,
}


def main(argv=None) -> int:
    load_dotenv()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    try:
        settings = _settings(args)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(
        level=getattr(logging, settings.log_level.upper()),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        with _sink(args.output) as out:
            return COMMANDS[args.command](args, settings, out)
    except (UsageError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (EvaluationError, ValueError) as e:
        logger.error("%s failed: %s", args.command, e)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
