"""
numeric/checks.py
Residual checks: q-difference equations, quasi-periodicity, pole residues,
the theta ratio, and agreement between exact series and numeric sums.
"""

import cmath
import itertools
import logging
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

from correlators.builders import corrected_onepoint
from numeric.evaluation import (
    EvalConfig,
    EvaluationError,
    evaluate_base,
    evaluate_series,
    format_complex,
    function_spec,
    to_base,
)
from numeric.theta import PRODUCT_ROUTE, THETA_ROUTE, b_function, theta
from ring.expansions import MINUS
from verification.reports import CheckReport

logger = logging.getLogger(__name__)


def _fmt(values: Sequence[complex]) -> List[str]:
    return [format_complex(v) for v in values]


# ── Difference equations ──────────────────────────────────────

@dataclass(frozen=True)
class MergePattern:
    """Slots 1 < i_1 < ... < i_s <= n merged into the first one with exponents eps."""
    indices: Tuple[int, ...] = ()
    signs: Tuple[int, ...] = ()

    @property
    def size(self) -> int:
        return len(self.indices)

    @property
    def negatives(self) -> int:
        return sum(1 for e in self.signs if e < 0)

    def describe(self) -> str:
        if not self.indices:
            return "t1"
        merged = "".join(
            f"*t{i}" + ("^-1" if e < 0 else "") for i, e in zip(self.indices, self.signs)
        )
        return f"t1{merged}"


@dataclass(frozen=True)
class DifferenceEquationSpec:
    """
    F(q t_1, t_2, ..., t_n) = sum over merge patterns of
    sign * F(t_1 prod t_i^eps_i, remaining slots),
    with sign (-1)^(1+s+#eps) for R and S and (-1)^(s+#eps) for R-minus and
    S-minus. R-minus carries the extra term -R-minus(t_2, ..., t_n).
    """
    func: str
    arity: int

    def __post_init__(self):
        function_spec(self.func)
        if self.arity < 1:
            raise ValueError(f"arity must be >= 1, got {self.arity}")

    @property
    def alternating(self) -> bool:
        return function_spec(self.func).sign < 0

    def patterns(self) -> Iterator[MergePattern]:
        """All 3^(n-1) patterns: each later slot absent, merged as t_i, or as 1/t_i."""
        for choice in itertools.product((0, 1, -1), repeat=self.arity - 1):
            indices = tuple(i + 2 for i, c in enumerate(choice) if c)
            signs = tuple(c for c in choice if c)
            yield MergePattern(indices, signs)

    def sign(self, pattern: MergePattern) -> int:
        exponent = pattern.size + pattern.negatives + (0 if self.alternating else 1)
        return -1 if exponent % 2 else 1

    def arguments(self, pattern: MergePattern, us: Sequence[complex]) -> List[complex]:
        first = us[0]
        for i, e in zip(pattern.indices, pattern.signs):
            first *= us[i - 1] if e > 0 else 1 / us[i - 1]
        rest = [u for j, u in enumerate(us[1:], start=2) if j not in pattern.indices]
        return [first] + rest


def default_difference_points(q: complex, arity: int) -> List[complex]:
    """|t_1| = |q|^(-1/2) and unit-modulus later slots with generic phases."""
    t1 = abs(q) ** -0.5 * cmath.exp(0.37j)
    return [t1] + [cmath.exp(1j * (0.9 * i + 0.3)) for i in range(1, arity)]


def check_difference_equation(spec: DifferenceEquationSpec, q: complex, ts: Sequence[complex],
                              cfg: EvalConfig, tol: Optional[float] = None) -> CheckReport:
    """
    Both sides of the difference equation by independent summation, with
    odd strict functions evaluated in hat variables throughout.
    """
    if len(ts) != spec.arity:
        raise ValueError(f"expected {spec.arity} arguments, got {len(ts)}")
    tol = cfg.tolerance if tol is None else tol
    x, us = to_base(spec.func, q, ts)
    cutoffs = []

    lhs_eval = evaluate_base(spec.func, x, [x * us[0]] + list(us[1:]), cfg)
    cutoffs.append(lhs_eval.cutoff)

    rhs = 0j
    if spec.func == "R-":
        extra = evaluate_base(spec.func, x, list(us[1:]), cfg)
        rhs -= extra.value
        cutoffs.append(extra.cutoff)
    for pattern in spec.patterns():
        try:
            ev = evaluate_base(spec.func, x, spec.arguments(pattern, us), cfg)
        except EvaluationError as e:
            raise type(e)(f"pattern {pattern.describe()}: {e}") from e
        rhs += spec.sign(pattern) * ev.value
        cutoffs.append(ev.cutoff)

    return CheckReport.from_residual(
        f"difference_equation[{spec.func},n={spec.arity}]",
        abs(lhs_eval.value - rhs),
        tol,
        params={"q": format_complex(q), "t": _fmt(ts)},
        cutoff=max(cutoffs),
    )


def check_quasi_periodicity(func: str, q: complex, t: complex, cfg: EvalConfig,
                            tol: Optional[float] = None) -> CheckReport:
    """
    R(qt) + R(t) and S(qt) + S(t); for the alternating functions
    R-(qt) - R-(t) + (q;q)_inf and S-(qt) - S-(t).
    """
    tol = cfg.tolerance if tol is None else tol
    spec = function_spec(func)
    x, (u,) = to_base(func, q, [t])
    shifted = evaluate_base(func, x, [x * u], cfg)
    plain = evaluate_base(func, x, [u], cfg)
    if spec.sign > 0:
        residual = abs(shifted.value + plain.value)
    elif spec.odd:
        residual = abs(shifted.value - plain.value)
    else:
        vacuum = evaluate_base(func, x, [], cfg).value
        residual = abs(shifted.value - plain.value + vacuum)
    return CheckReport.from_residual(
        f"quasi_periodicity[{func}]",
        residual,
        tol,
        params={"q": format_complex(q), "t": format_complex(t)},
        cutoff=max(shifted.cutoff, plain.cutoff),
    )


# ── Poles ─────────────────────────────────────────────────────

def check_pole_residue(func: str, q: complex, rest: Sequence[complex], cfg: EvalConfig,
                       tol: float = 1e-4, epsilon: Optional[float] = None) -> CheckReport:
    """
    lim_{t_1 -> 1} (t_1 - 1) F(t_1, rest) = F(rest), the empty case being the
    partition generating function.

    The pole-cleared product is evaluated at t_1 = 1 + eps and 1 + eps/2 and
    Richardson-extrapolated. The residual is relative to max(1, |F(rest)|);
    params record the first-order error ratio, which should be near 2.
    """
    eps = cfg.pole_epsilon if epsilon is None else epsilon
    x, us = to_base(func, q, list(rest))

    def cleared(e: float):
        (u1,) = to_base(func, q, [1 + e])[1]
        return evaluate_base(func, x, [u1] + us, cfg, clear_first=True)

    coarse, fine = cleared(eps), cleared(eps / 2)
    target = evaluate_base(func, x, us, cfg)
    extrapolated = 2 * fine.value - coarse.value
    scale = max(1.0, abs(target.value))
    fine_error = abs(fine.value - target.value)
    ratio = abs(coarse.value - target.value) / fine_error if fine_error else None
    report = CheckReport.from_residual(
        f"pole_residue[{func},n={len(rest) + 1}]",
        abs(extrapolated - target.value) / scale,
        tol,
        params={
            "q": format_complex(q),
            "t_rest": _fmt(rest),
            "epsilon": eps,
            "error_ratio": None if ratio is None else round(ratio, 6),
        },
        cutoff=max(coarse.cutoff, fine.cutoff, target.cutoff),
    )
    return report


# ── Theta ratio ───────────────────────────────────────────────

def check_b_shift(q: complex, t: complex, cfg: EvalConfig, tol: float = 1e-9) -> CheckReport:
    """
    B(q, qt) * B(q, t) against a sign: +1 when q and t are positive real,
    otherwise the nearest of +1 and -1. Both are recorded in params.
    """
    q, t = complex(q), complex(t)
    value = b_function(q, q * t, cfg) * b_function(q, t, cfg)
    if q.imag == 0 and t.imag == 0 and q.real > 0 and t.real > 0:
        expected = 1
    else:
        expected = None
    sign = expected or (1 if abs(value - 1) <= abs(value + 1) else -1)
    return CheckReport.from_residual(
        "b_shift",
        abs(value - sign),
        tol,
        params={
            "q": format_complex(q),
            "t": format_complex(t),
            "sign": sign,
            "expected": expected,
        },
    )


def check_triple_product(q: complex, t: complex, cfg: EvalConfig,
                         tol: float = 1e-9) -> CheckReport:
    """Squared agreement of the theta and product routes; the unsquared ratio is recorded."""
    by_theta = b_function(q, t, cfg, route=THETA_ROUTE)
    by_product = b_function(q, t, cfg, route=PRODUCT_ROUTE)
    ratio = by_theta / by_product
    return CheckReport.from_residual(
        "triple_product",
        abs(by_theta ** 2 - by_product ** 2),
        tol,
        params={"q": format_complex(q), "t": format_complex(t), "ratio": format_complex(ratio, 6)},
    )


def check_theta_reflection(j: int, q: complex, t: complex, tol: float = 1e-12) -> CheckReport:
    """theta_{j,1}(q, 1/t) = theta_{j,1}(q, t)."""
    residual = abs(theta(j, q, 1 / t) - theta(j, q, t))
    return CheckReport.from_residual(
        f"theta_reflection[j={j}]",
        residual,
        tol,
        params={"q": format_complex(q), "t": format_complex(t)},
    )


# ── Exact against numeric ─────────────────────────────────────

def check_series_consistency(kind, q: complex, t: complex, profile, cfg: EvalConfig,
                             tol: float = 1e-6) -> CheckReport:
    """
    The |t| < 1 expansion of the one-point function, summed at (q, t), against
    the numeric trace. Needs |q| < |t| < 1.
    """
    func = "S" if kind.is_odd else "R"
    x, (u,) = to_base(func, q, [t])
    series = corrected_onepoint(kind, MINUS, profile, var=profile.variables[0])
    exact = evaluate_series(series, {"q": x, profile.variables[0]: u})
    numeric = evaluate_base(func, x, [u], cfg)
    return CheckReport.from_residual(
        f"series_consistency[{kind.value}]",
        abs(exact - numeric.value),
        tol,
        params={
            "q": format_complex(q),
            "t": format_complex(t),
            "q_order": profile.q_max,
            "t_band": profile.band(profile.variables[0]),
        },
        cutoff=numeric.cutoff,
    )
