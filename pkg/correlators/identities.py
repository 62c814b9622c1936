"""
correlators/identities.py
Both sides of every exact identity: first-row lemmas, the Euler identity,
subtracted expectation identities, the closed and theta forms of the
one-point functions, the alternating closed form, and the masked
quasi-periodicity check.

Builders return (lhs, rhs) pairs; comparison happens in verification.
"""

import logging
from fractions import Fraction
from typing import List, Optional, Tuple

from correlators.builders import (
    _base_key,
    _step,
    alternating_onepoint,
    corrected_onepoint,
    generating_function,
    normal_ordered_npoint,
    partition_sum,
)
from partitions.strict import Partition, PartitionKind
from ring.expansions import (
    MINUS,
    PLUS,
    correction,
    finite_pochhammer,
    pochhammer_inf,
    pochhammer_log_derivative,
    subst_qshift,
)
from ring.series import (
    Series,
    TruncationProfile,
    constant,
    eq_on_window,
    inverse_geometric,
    monomial,
    mul,
    zero,
)
from verification.reports import CheckReport

logger = logging.getLogger(__name__)

Pair = Tuple[Series, Series]


def _allowed_parts(kind: PartitionKind, limit: int) -> range:
    return range(1, limit + 1, _step(kind))


# ── First-row lemmas ──────────────────────────────────────────

def _first_row_series(kind: PartitionKind, k: int, profile: TruncationProfile,
                      var: str) -> Series:
    """
    sum_lambda (q^k t)^lambda_1 q^|lambda| in closed form:
    1 + sum_p prod(1 + q^i over admissible parts i < p) * q^(p(1+k)) t^p.
    """
    total = constant(1, profile)
    step = _step(kind)
    for p in _allowed_parts(kind, profile.q_max):
        if p * (1 + k) > profile.q_max:
            break
        below = (p - 1) // step
        smaller = finite_pochhammer(_base_key(profile, q=1), 1, step, below, profile)
        total = total + smaller.shift_by(_base_key(profile, q=p * (1 + k), **{var: p}))
    return total


def _inverse_q_product(kind: PartitionKind, k: int, profile: TruncationProfile) -> Series:
    """1/prod_{i=1}^{k} (1 - q^i), with q^i read as q-hat^(2i) for odd strict."""
    step = _step(kind)
    result = constant(1, profile)
    for i in range(1, k + 1):
        result = mul(result, inverse_geometric(_base_key(profile, q=step * i), profile))
    return result


def lemma_row_sums(kind: PartitionKind, k: int, profile: TruncationProfile,
                   var: str = "t") -> Pair:
    """
    lhs = sum over partitions with at least k parts of t^lambda_(k+1) q^|lambda|;
    lambda_(k+1) = 0 when the length is exactly k.

    rhs for strict partitions: q^(k(k+1)/2)/prod(1-q^i) times the first-row
    series at q^k t. For odd strict partitions the shift splits off the
    partitions of length exactly k, which contribute q-hat^(k^2)/prod(1-q-hat^(2i)).
    """
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")

    def row_monomial(lam: Partition) -> Optional[Series]:
        if lam.length < k:
            return None
        return monomial(_base_key(profile, **{var: lam.part(k + 1)}), profile)

    lhs = partition_sum(kind, profile, row_monomial)
    first_row = _first_row_series(kind, k, profile, var)
    if k == 0:
        return lhs, first_row

    inverse = _inverse_q_product(kind, k, profile)
    if not kind.is_odd:
        lead = _base_key(profile, q=k * (k + 1) // 2)
        return lhs, mul(inverse, first_row).shift_by(lead)

    shifted = mul(inverse, first_row - 1).shift_by(_base_key(profile, q=k * (k + 1)))
    exact_length = inverse.shift_by(_base_key(profile, q=k * k))
    return lhs, shifted + exact_length


def euler_identity(profile: TruncationProfile) -> Pair:
    """sum_k q^(k(k+1)/2) z^k / prod_{i<=k}(1-q^i)  vs  prod_{r>=0}(1 + q^(r+1) z)."""
    lhs = zero(profile)
    k = 0
    while k * (k + 1) // 2 <= profile.q_max and k <= profile.z_max:
        term = _inverse_q_product(PartitionKind.STRICT, k, profile)
        lhs = lhs + term.shift_by(_base_key(profile, q=k * (k + 1) // 2, z=k))
        k += 1
    rhs = pochhammer_inf(_base_key(profile, q=1, z=1), 1, 1, profile)
    return lhs, rhs


# ── Expectation identities ────────────────────────────────────

def regularized_expectation_identity(kind: PartitionKind, z_weighted: bool,
                                     profile: TruncationProfile, var: str = "t") -> Pair:
    """
    Subtracted form of the first-row expectation:
    sum_lambda [sum_k (t^lambda_k - 1)] q^|lambda| (z^length)
      = Z(z) * sum_m q^m (t^m - 1) z / (1 + q^m z)
    with Z the (z-weighted) partition generating function.
    """
    def subtracted(lam: Partition) -> Series:
        terms = {}
        for p in lam.parts:
            key = _base_key(profile, **{var: p})
            if profile.contains(key):
                terms[key] = terms.get(key, 0) + 1
        terms[profile.zero_key] = Fraction(-lam.length)
        return Series(terms, profile)

    lhs = partition_sum(kind, profile, subtracted, z_weighted=z_weighted)

    z = 1 if z_weighted else 0
    inner = zero(profile)
    for m in _allowed_parts(kind, profile.q_max):
        denom = inverse_geometric(_base_key(profile, q=m, z=z), profile, coefficient=-1)
        numer = (
            monomial(_base_key(profile, q=m, z=z, **{var: m}), profile)
            - monomial(_base_key(profile, q=m, z=z), profile)
        )
        inner = inner + mul(numer, denom)
    rhs = mul(generating_function(kind, profile, z_weighted=z_weighted), inner)
    return lhs, rhs


# ── One-point closed forms ────────────────────────────────────

def _antisymmetric_divisor_sum(kind: PartitionKind, profile: TruncationProfile, var: str,
                               z_weighted: bool = False) -> Series:
    """sum_m q^m (t^m - t^-m) z / (1 + q^m z)."""
    z = 1 if z_weighted else 0
    total = zero(profile)
    for m in _allowed_parts(kind, profile.q_max):
        denom = inverse_geometric(_base_key(profile, q=m, z=z), profile, coefficient=-1)
        numer = (
            monomial(_base_key(profile, q=m, z=z, **{var: m}), profile)
            - monomial(_base_key(profile, q=m, z=z, **{var: -m}), profile)
        )
        total = total + mul(numer, denom)
    return total


def _lambert_sum(kind: PartitionKind, profile: TruncationProfile, var: str,
                 orientation: int = 1) -> Series:
    """
    sum_r (-1)^r x_r / (1 - x_r^g) with x_r = q^(r+1) t^orientation, g = 1 for
    strict and x_r = q-hat^(r+1) t-hat^orientation, g = 2 for odd strict.
    """
    g = _step(kind)
    total = zero(profile)
    r = 0
    while r + 1 <= profile.q_max:
        lead = _base_key(profile, q=r + 1, **{var: orientation})
        denom = inverse_geometric(
            _base_key(profile, q=g * (r + 1), **{var: g * orientation}), profile
        )
        term = denom.shift_by(lead)
        total = total + (term if r % 2 == 0 else -term)
        r += 1
    return total


def closed_form_onepoint(kind: PartitionKind, profile: TruncationProfile,
                         var: str = "t", form: str = "divisor") -> Series:
    """
    :R:(t) = (-q;q)_inf sum_n q^n (t^n - t^-n)/(1 + q^n), or its odd strict
    analogue over odd n. form="lambert" uses the alternating r-sum instead.
    """
    if form == "divisor":
        inner = _antisymmetric_divisor_sum(kind, profile, var)
    elif form == "lambert":
        inner = _lambert_sum(kind, profile, var, 1) - _lambert_sum(kind, profile, var, -1)
    else:
        raise ValueError(f"unknown closed form: {form!r}")
    return mul(generating_function(kind, profile), inner)


def lambert_swap(kind: PartitionKind, profile: TruncationProfile, var: str = "t") -> Pair:
    """sum_n q^n t^n/(1 + q^n)  vs  sum_r (-1)^r q^(r+1) t/(1 - q^(r+1) t)."""
    lhs = zero(profile)
    for m in _allowed_parts(kind, profile.q_max):
        denom = inverse_geometric(_base_key(profile, q=m), profile, coefficient=-1)
        lhs = lhs + denom.shift_by(_base_key(profile, q=m, **{var: m}))
    return lhs, _lambert_sum(kind, profile, var, 1)


def theta_logderiv_form(kind: PartitionKind, profile: TruncationProfile,
                        var: str = "t") -> Series:
    """
    Z * t d/dt log of the theta ratio B(q, t); the prefactor contributes -1/2
    and the lone pure-t factor (1 - t) is expanded for |t| < 1.

    For odd strict partitions this is Z * (1/2) t-hat d/dt-hat log(B(q-hat, t-hat)/B(q-hat, -t-hat)),
    where the prefactors cancel.
    """
    def key(q, t):
        return _base_key(profile, q=q, **{var: t})

    def plog(q, t, sign):
        return pochhammer_log_derivative(key(q, t), sign, 2, var, profile)

    theta_part = plog(0, 1, -1) + plog(2, -1, -1) - plog(1, 1, -1) - plog(1, -1, -1)
    if not kind.is_odd:
        bracket = theta_part + constant(Fraction(-1, 2), profile)
    else:
        reflected = plog(0, 1, 1) + plog(2, -1, 1) - plog(1, 1, 1) - plog(1, -1, 1)
        bracket = (theta_part - reflected) * Fraction(1, 2)
    return mul(generating_function(kind, profile), bracket)


def rminus_closed_form(profile: TruncationProfile, var: str = "t") -> Pair:
    """
    Alternating strict trace (z -> -1) against
    (q;q)_inf * t d/dt log(t^(-1/2) (t;q)_inf (q/t;q)_inf).
    """
    lhs = alternating_onepoint(PartitionKind.STRICT, MINUS, profile, var=var)
    target = lhs.profile

    def plog(q, t):
        return pochhammer_log_derivative(_base_key(target, q=q, **{var: t}), -1, 1, var, target)

    bracket = constant(Fraction(-1, 2), target) + plog(0, 1) + plog(1, -1)
    rhs = mul(generating_function(PartitionKind.STRICT, target, sign=-1), bracket)
    return lhs, rhs


def super_closed_form(kind: PartitionKind, profile: TruncationProfile, var: str = "t") -> Pair:
    """
    z-weighted corrected function against
    (-qz; q)_inf * [c(t) + sum_n q^n (t^n - t^-n) z / (1 + q^n z)].
    """
    lhs = corrected_onepoint(kind, MINUS, profile, z_weighted=True, var=var)
    inner = _antisymmetric_divisor_sum(kind, profile, var, z_weighted=True)
    inner = inner + correction(MINUS, var, profile, odd=kind.is_odd)
    rhs = mul(generating_function(kind, profile, z_weighted=True), inner)
    return lhs, rhs


# ── Quasi-periodicity and symmetries ──────────────────────────

def quasi_periodicity_exact(kind: PartitionKind, profile: TruncationProfile,
                            alternating: bool = False, var: str = "t") -> CheckReport:
    """
    shift_{t -> qt}(F minus-expansion) against the plus-expansion on the
    masked window:
      R, S:      shift(minus) = -plus
      R-minus:   shift(minus) = plus - (q;q)_inf
      S-minus:   shift(minus) = plus
    """
    if alternating:
        minus = alternating_onepoint(kind, MINUS, profile, var=var)
        plus = alternating_onepoint(kind, PLUS, profile, var=var)
        rhs = plus
        if not kind.is_odd:
            rhs = plus - generating_function(kind, plus.profile, sign=-1)
        name = f"quasi_periodicity_exact[{kind.value},alternating]"
    else:
        minus = corrected_onepoint(kind, MINUS, profile, var=var)
        rhs = -corrected_onepoint(kind, PLUS, profile, var=var)
        name = f"quasi_periodicity_exact[{kind.value}]"
    lhs = subst_qshift(minus, var, 1)
    return eq_on_window(lhs, rhs, lhs.profile, identity=name,
                        params={"kind": kind.value, "alternating": alternating})


def symmetry_checks(kind: PartitionKind, variables: Tuple[str, ...],
                    profile: TruncationProfile) -> List[CheckReport]:
    """Antisymmetry in each slot and invariance under swapping adjacent slots."""
    series = normal_ordered_npoint(kind, variables, profile)
    reports = []
    for var in variables:
        reports.append(eq_on_window(
            series.reflect(var), -series, profile,
            identity=f"antisymmetry[{kind.value},{var}]",
        ))
    for a, b in zip(variables, variables[1:]):
        reports.append(eq_on_window(
            series.rename({a: b, b: a}), series, profile,
            identity=f"slot_symmetry[{kind.value},{a}<->{b}]",
        ))
    return reports
