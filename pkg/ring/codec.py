"""
ring/codec.py
Canonical text forms of a series: rows of {exponents, num, den} in
graded-lexicographic order, as JSON or CSV.
"""

import csv
import io
import json
import logging
from fractions import Fraction
from typing import Any, Dict, List

from ring.series import Series, SeriesError, TruncationProfile

logger = logging.getLogger(__name__)


def to_rows(series: Series) -> List[Dict[str, Any]]:
    rows = []
    for key, value in series.items():
        if not series.reliable(key):
            continue
        rows.append({
            "exponents": series.profile.unpack(key).as_dict(),
            "num": str(value.numerator),
            "den": str(value.denominator),
        })
    return rows


def to_json(series: Series, indent=None) -> str:
    return json.dumps(to_rows(series), indent=indent, ensure_ascii=False)


def to_csv(series: Series) -> str:
    names = ["q", *series.profile.variables, "z"]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(names + ["num", "den"])
    for row in to_rows(series):
        exps = row["exponents"]
        writer.writerow([exps.get(n, 0) for n in names] + [row["num"], row["den"]])
    return buf.getvalue()


def to_text(series: Series) -> str:
    names = ["q", *series.profile.variables, "z"]
    lines = []
    for row in to_rows(series):
        exps = row["exponents"]
        mono = " ".join(f"{n}^{exps.get(n, 0)}" for n in names)
        value = Fraction(int(row["num"]), int(row["den"]))
        lines.append(f"{mono}  {value}")
    return "\n".join(lines) + ("\n" if lines else "")


def from_rows(rows: List[Dict[str, Any]], profile: TruncationProfile) -> Series:
    terms = {}
    for row in rows:
        try:
            exps = dict(row["exponents"])
            value = Fraction(int(row["num"]), int(row["den"]))
        except (KeyError, TypeError, ValueError) as e:
            raise SeriesError(f"malformed series row {row!r}: {e}")
        key = (exps.pop("q", 0),) + tuple(exps.pop(v, 0) for v in profile.variables) + (exps.pop("z", 0),)
        if any(exps.values()):
            raise SeriesError(f"row mentions variables outside the profile: {sorted(exps)}")
        terms[key] = terms.get(key, 0) + value
    return Series(terms, profile)


def from_json(text: str, profile: TruncationProfile) -> Series:
    return from_rows(json.loads(text), profile)
