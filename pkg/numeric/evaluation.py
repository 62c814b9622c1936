"""
numeric/evaluation.py
Complex evaluation of the correlators R, R-minus, S and S-minus.

Every function is a sum over partitions of

    sign^length * x^|lambda| * prod_i (scale_i * F(lambda; u_i) + const_i),
    F(lambda; u) = sum_k (u^lambda_k - u^-lambda_k),

in base variables: (x, u) = (q, t) for strict partitions and
(q-hat, t-hat) = (sqrt(q), sqrt(t)) for odd strict partitions. Ordinarily
scale_i = 1 and const_i is the correction constant; the pole check clears
the first slot by passing other values.
"""

import cmath
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from partitions.strict import PartitionKind, enumerate_partitions

logger = logging.getLogger(__name__)


class EvaluationError(ValueError):
    """A numeric evaluation could not be carried out."""


class AnnulusError(EvaluationError):
    """An argument lies outside the guarded annulus of convergence."""


class PoleProximityError(EvaluationError):
    """An argument lies within the guard distance of the pole t = 1."""


class TailToleranceError(EvaluationError):
    """The truncation tail cannot be brought under tolerance within the cutoff cap."""


class ThetaDegeneracyError(EvaluationError):
    """A theta value or product used as a divisor is numerically zero."""


TRANSFER = "transfer"
STREAM = "stream"
METHODS = (TRANSFER, STREAM)


@dataclass(frozen=True)
class EvalConfig:
    """
    Numeric parameters shared by every evaluation and check.

    weight_cutoff: largest part (transfer) or weight (stream) summed.
    tail_tol: bound the truncation tail must respect.
    annulus_guard: delta in |q|+delta <= |t| <= 1/|q|-delta and |t-1| >= delta.
    max_cutoff: cap for adaptive cutoff growth.
    tolerance: residual threshold for numeric checks.
    """
    weight_cutoff: int = 60
    tail_tol: float = 1e-12
    annulus_guard: float = 1e-3
    max_cutoff: int = 400
    adaptive: bool = True
    method: str = TRANSFER
    tolerance: float = 1e-8
    pole_epsilon: float = 1e-4

    def __post_init__(self):
        if self.weight_cutoff < 1:
            raise ValueError(f"weight_cutoff must be >= 1, got {self.weight_cutoff}")
        if self.max_cutoff < self.weight_cutoff:
            raise ValueError(
                f"max_cutoff {self.max_cutoff} is below weight_cutoff {self.weight_cutoff}"
            )
        for name in ("tail_tol", "annulus_guard", "tolerance", "pole_epsilon"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.method not in METHODS:
            raise ValueError(f"unknown evaluation method {self.method!r}; use one of {METHODS}")


@dataclass(frozen=True)
class Evaluation:
    value: complex
    cutoff: int
    tail: float
    method: str


@dataclass(frozen=True)
class FunctionSpec:
    name: str
    kind: PartitionKind
    sign: int

    @property
    def odd(self) -> bool:
        return self.kind.is_odd

    @property
    def step(self) -> int:
        return 2 if self.odd else 1


FUNCTIONS: Dict[str, FunctionSpec] = {
    "R": FunctionSpec("R", PartitionKind.STRICT, 1),
    "R-": FunctionSpec("R-", PartitionKind.STRICT, -1),
    "S": FunctionSpec("S", PartitionKind.ODD_STRICT, 1),
    "S-": FunctionSpec("S-", PartitionKind.ODD_STRICT, -1),
}


def function_spec(func: str) -> FunctionSpec:
    try:
        return FUNCTIONS[func]
    except KeyError:
        raise EvaluationError(f"unknown function {func!r}; known: {', '.join(FUNCTIONS)}")


def correction_value(func: str, u: complex) -> complex:
    """(t+1)/(2(t-1)) for strict functions, t-hat/(t-hat^2 - 1) for odd strict ones."""
    if function_spec(func).odd:
        return u / (u * u - 1)
    return (u + 1) / (2 * (u - 1))


def to_base(func: str, q: complex, ts: Sequence[complex]) -> Tuple[complex, List[complex]]:
    """Map (q, t_i) to base variables; principal square roots for odd strict functions."""
    if function_spec(func).odd:
        return cmath.sqrt(q), [cmath.sqrt(t) for t in ts]
    return complex(q), [complex(t) for t in ts]


# ── Guards ────────────────────────────────────────────────────

def _actual(spec: FunctionSpec, v: complex) -> complex:
    return v * v if spec.odd else v


def check_annulus(q: complex, t: complex, guard: float):
    """|q| + guard <= |t| <= 1/|q| - guard."""
    aq, at = abs(q), abs(t)
    if aq >= 1:
        raise AnnulusError(f"|q| = {aq:.6g} must be below 1")
    if at < aq + guard:
        raise AnnulusError(f"|t| = {at:.6g} is inside |q| + guard = {aq + guard:.6g}")
    if aq > 0 and at > 1 / aq - guard:
        raise AnnulusError(f"|t| = {at:.6g} is beyond 1/|q| - guard = {1 / aq - guard:.6g}")


def check_pole(t: complex, guard: float):
    if abs(t - 1) < guard:
        raise PoleProximityError(f"t = {format_complex(t)} is within {guard:g} of the pole t = 1")


def decay_rate(x: complex, us: Sequence[complex]) -> float:
    """rho = |x| * prod_i max(|u_i|, 1/|u_i|); the sum converges for rho < 1."""
    rho = abs(x)
    for u in us:
        au = abs(u)
        rho *= max(au, 1 / au)
    return rho


def _prefactor(x: complex, scales: Sequence[complex], consts: Sequence[complex]) -> float:
    bound = 1.0
    for a, c in zip(scales, consts):
        bound *= abs(a) + abs(c)
    ax = abs(x)
    m = 1
    while ax ** m > 1e-17:
        bound *= 1 + ax ** m
        m += 1
    return bound


def tail_bound(x, us, scales, consts, cutoff: int) -> float:
    rho = decay_rate(x, us)
    if rho == 0:
        return 0.0
    return _prefactor(x, scales, consts) * 2 ** len(us) * rho ** (cutoff + 1) / (1 - rho)


def choose_cutoff(x, us, scales, consts, cfg: EvalConfig) -> Tuple[int, float]:
    """Smallest admissible cutoff >= cfg.weight_cutoff whose tail bound meets tail_tol."""
    rho = decay_rate(x, us)
    if rho >= 1:
        raise AnnulusError(f"decay rate {rho:.6g} >= 1; the sum does not converge here")
    cutoff = cfg.weight_cutoff
    tail = tail_bound(x, us, scales, consts, cutoff)
    if tail <= cfg.tail_tol:
        return cutoff, tail
    if not cfg.adaptive:
        raise TailToleranceError(
            f"tail bound {tail:.3e} exceeds {cfg.tail_tol:.1e} at cutoff {cutoff}"
        )
    lead = _prefactor(x, scales, consts) * 2 ** len(us) / (1 - rho)
    needed = math.ceil(math.log(cfg.tail_tol / lead) / math.log(rho)) - 1
    cutoff = max(cutoff, needed)
    if cutoff > cfg.max_cutoff:
        raise TailToleranceError(
            f"cutoff {cutoff} needed for tail {cfg.tail_tol:.1e} exceeds cap {cfg.max_cutoff}"
        )
    return cutoff, tail_bound(x, us, scales, consts, cutoff)


# ── Summation ─────────────────────────────────────────────────

def _slot_sums(x: complex, us: Sequence[complex], sign: int,
               parts: np.ndarray) -> Dict[int, np.ndarray]:
    """
    For each non-empty slot subset U (bitmask), the contribution of part m:
    sign * x^m prod_{i in U} (u_i^m - u_i^-m) = sign * sum_eps (prod eps) (x prod u_i^eps_i)^m.
    The merged base has modulus <= rho < 1, so no power overflows.
    """
    n = len(us)
    out = {}
    for mask in range(1, 1 << n):
        slots = [i for i in range(n) if mask >> i & 1]
        bases, signs = [], []
        for eps in itertools.product((1, -1), repeat=len(slots)):
            b = x
            for i, e in zip(slots, eps):
                b *= us[i] if e > 0 else 1 / us[i]
            bases.append(b)
            signs.append(math.prod(eps))
        powers = np.power.outer(np.array(bases, dtype=complex), parts)
        out[mask] = sign * (np.array(signs, dtype=float) @ powers)
    return out


def _combine(states: np.ndarray, scales: Sequence[complex], consts: Sequence[complex]) -> complex:
    """sum_T G_T prod_{i in T} scale_i prod_{i not in T} const_i."""
    n = len(scales)
    total = 0j
    for mask in range(1 << n):
        term = complex(states[mask])
        for i in range(n):
            term *= scales[i] if mask >> i & 1 else consts[i]
        total += term
    return total


def _sum_transfer(spec: FunctionSpec, x, us, scales, consts, cutoff: int) -> complex:
    """
    Parts are included one at a time. The state G_T collects
    sum_lambda sign^length x^|lambda| prod_{i in T} F(lambda; u_i) over
    partitions with parts up to the current one.
    """
    n = len(us)
    parts = np.arange(1, cutoff + 1, spec.step)
    weights = spec.sign * np.power(complex(x), parts)
    merged = _slot_sums(x, us, spec.sign, parts)
    states = np.zeros(1 << n, dtype=complex)
    states[0] = 1
    for k in range(len(parts)):
        nxt = states * (1 + weights[k])
        for mask in range(1, 1 << n):
            sub = mask
            while sub:
                nxt[mask] += states[mask & ~sub] * merged[sub][k]
                sub = (sub - 1) & mask
        states = nxt
    return _combine(states, scales, consts)


def _sum_stream(spec: FunctionSpec, x, us, scales, consts, cutoff: int) -> complex:
    """Partition by partition in enumeration order, up to weight `cutoff`."""
    total = 0j
    for lam in enumerate_partitions(spec.kind, cutoff):
        term = complex(spec.sign ** lam.length) * x ** lam.weight
        for u, a, c in zip(us, scales, consts):
            f = sum(u ** p - u ** -p for p in lam.parts)
            term *= a * f + c
        total += term
    return total


_SUMMERS = {TRANSFER: _sum_transfer, STREAM: _sum_stream}


def evaluate_base(func: str, x: complex, us: Sequence[complex], cfg: EvalConfig,
                  clear_first: bool = False) -> Evaluation:
    """
    Evaluate in base variables.

    Args:
        func: "R", "R-", "S" or "S-".
        x: q, or q-hat for odd strict functions.
        us: slot arguments in the same variables.
        cfg: cutoff, tolerance and guard settings.
        clear_first: multiply the first slot by (t-1), removing its pole.

    Returns:
        Evaluation carrying the value, the cutoff used and the tail bound.
    """
    spec = function_spec(func)
    x = complex(x)
    if abs(x) >= 1:
        raise AnnulusError(f"|q| = {abs(x):.6g} must be below 1")
    us = [complex(u) for u in us]
    scales = [1 + 0j] * len(us)
    consts = []
    for i, u in enumerate(us):
        actual = _actual(spec, u)
        check_annulus(_actual(spec, x), actual, cfg.annulus_guard)
        if i == 0 and clear_first:
            scales[0] = actual - 1
            consts.append(u if spec.odd else (u + 1) / 2)
            continue
        check_pole(actual, cfg.annulus_guard)
        consts.append(correction_value(func, u))

    cutoff, tail = choose_cutoff(x, us, scales, consts, cfg)
    value = _SUMMERS[cfg.method](spec, x, us, scales, consts, cutoff)
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise EvaluationError(f"{func} evaluated to a non-finite value at cutoff {cutoff}")
    logger.debug("%s at x=%s: cutoff=%d tail=%.2e", func, format_complex(x), cutoff, tail)
    return Evaluation(value=value, cutoff=cutoff, tail=tail, method=cfg.method)


def eval_correlator(func: str, q: complex, ts: Sequence[complex],
                    cfg: Optional[EvalConfig] = None) -> Evaluation:
    """R, R-minus, S or S-minus at (q, t_1..t_n); n = 0 gives the partition generating function."""
    cfg = cfg or EvalConfig()
    x, us = to_base(func, q, ts)
    return evaluate_base(func, x, us, cfg)


def evaluate_series(series, point: Dict[str, complex]) -> complex:
    """
    Sum an exact series at a numeric point. `point` maps "q", each t-variable
    and "z" (when present) to values; masked coefficients are skipped.
    """
    profile = series.profile
    names = ("q",) + profile.variables + ("z",)
    values = [complex(point.get(name, 1)) for name in names]
    total = 0j
    for key, coeff in series.items():
        if not series.reliable(key):
            continue
        term = complex(float(coeff))
        for v, e in zip(values, key):
            if e:
                term *= v ** e
        total += term
    return total


# ── Formatting ────────────────────────────────────────────────

def parse_complex(text: str) -> complex:
    """Parse "a+bi", "a-bi", "bi" or "a" with decimal literals."""
    cleaned = text.strip().replace(" ", "")
    if cleaned.endswith("i"):
        cleaned = cleaned[:-1] + "j"
    try:
        return complex(cleaned)
    except ValueError:
        raise ValueError(f"not a complex number: {text!r}")


def format_complex(value: complex, digits: int = 12) -> str:
    value = complex(value)
    re = f"{value.real:.{digits}g}"
    if value.imag == 0:
        return re
    sign = "+" if value.imag > 0 else "-"
    return f"{re}{sign}{abs(value.imag):.{digits}g}i"
