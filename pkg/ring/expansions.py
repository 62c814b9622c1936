"""
ring/expansions.py
Named expansions built on the series core: q-Pochhammer products, the
q-shift substitution t -> q^a t, factorwise log-derivatives, and the two
boundary expansions of the correction constants.
"""

import logging
from fractions import Fraction
from typing import Dict, Union

from ring.series import (
    ExponentKey,
    InadmissibleExpansionError,
    Key,
    MaskConstraint,
    Scalar,
    Series,
    TruncationProfile,
    constant,
)

logger = logging.getLogger(__name__)

MINUS = "minus"
PLUS = "plus"


def _pack(a: Union[ExponentKey, Key], profile: TruncationProfile) -> Key:
    return profile.pack(a) if isinstance(a, ExponentKey) else tuple(a)


def _check_pochhammer_base(key: Key):
    if key[0] >= 1:
        return
    if key[0] < 0:
        raise InadmissibleExpansionError(f"pochhammer_inf: negative q exponent in {key}")
    if key[-1] >= 1:
        return
    if any(e < 0 for e in key[1:-1]):
        raise InadmissibleExpansionError(
            f"pochhammer_inf: base {key} has q-degree 0 and a negative t-exponent"
        )


def pochhammer_inf(a: Union[ExponentKey, Key], sign: int, step: int,
                   profile: TruncationProfile, coefficient: Scalar = 1) -> Series:
    """
    prod_{i>=0} (1 + sign*coefficient*a*q^(i*step)), truncated.

    (-q;q)_inf is pochhammer_inf(q, +1, 1); (qt;q^2)_inf is pochhammer_inf(q*t, -1, 2).
    """
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    if step < 1:
        raise ValueError(f"step must be >= 1, got {step}")
    base = _pack(a, profile)
    _check_pochhammer_base(base)
    c = Fraction(sign) * Fraction(coefficient)
    contains = profile.contains

    terms: Dict[Key, Fraction] = {profile.zero_key: Fraction(1)}
    i = 0
    while True:
        shift = (base[0] + i * step,) + base[1:]
        if shift[0] > profile.q_max:
            break
        i += 1
        if not contains(shift):
            break  # later factors only raise q further
        # terms <- terms * (1 + c*shift)
        updates = {}
        for k, v in terms.items():
            nk = tuple(x + y for x, y in zip(k, shift))
            if contains(nk):
                updates[nk] = updates.get(nk, 0) + v * c
        for k, v in updates.items():
            s = terms.get(k, 0) + v
            if s:
                terms[k] = s
            else:
                terms.pop(k, None)
    return Series._raw(terms, profile)


def finite_pochhammer(a: Union[ExponentKey, Key], sign: int, step: int, count: int,
                      profile: TruncationProfile) -> Series:
    """prod_{i=0}^{count-1} (1 + sign*a*q^(i*step)); the empty product is 1."""
    base = _pack(a, profile)
    result = constant(1, profile)
    for i in range(count):
        shift = (base[0] + i * step,) + base[1:]
        if shift[0] > profile.q_max:
            break
        result = result + result.shift_by(shift, sign)
    return result


def subst_qshift(s: Series, var: str, a: int) -> Series:
    """
    Substitute t_var -> q^a t_var: q^e t^j -> q^(e + a*j) t^j.

    Keys leaving the window are dropped. The result is masked by
    q - a*t_var <= q_max, beyond which the source data was never computed.
    """
    if a == 0:
        return s
    profile = s.profile
    idx = profile.index(var)
    out: Dict[Key, Fraction] = {}
    for k, v in s.terms.items():
        nq = k[0] + a * k[idx]
        if 0 <= nq <= profile.q_max:
            out[(nq,) + k[1:]] = v
    # earlier constraints were stated in source coordinates q_src = q - a*t
    shifted = []
    for c in s.mask:
        coeffs = dict(c.coeffs)
        coeffs[var] = coeffs.get(var, 0) + a
        shifted.append(MaskConstraint(c.bound, tuple(coeffs.items())))
    shifted.append(MaskConstraint(profile.q_max, ((var, a),)))
    return Series._raw(out, profile, shifted)


def pochhammer_log_derivative(a: Union[ExponentKey, Key], sign: int, step: int, var: str,
                              profile: TruncationProfile, coefficient: Scalar = 1) -> Series:
    """
    t d/dt log prod_i (1 + sign*c*a*q^(i*step)), factor by factor:
    t d/dt log(1 + y) = -e * sum_{k>=1} (-y)^k with e the t-exponent of y.
    """
    base = _pack(a, profile)
    _check_pochhammer_base(base)
    idx = profile.index(var)
    e = base[idx]
    if not e:
        return Series._raw({}, profile)
    y_coeff = -Fraction(sign) * Fraction(coefficient)
    contains = profile.contains
    terms: Dict[Key, Fraction] = {}
    i = 0
    while True:
        mono = (base[0] + i * step,) + base[1:]
        if mono[0] > profile.q_max:
            break
        i += 1
        if not contains(mono):
            break
        k = 1
        while True:
            key = tuple(k * x for x in mono)
            if not contains(key):
                break
            value = -e * y_coeff ** k
            total = terms.get(key, 0) + value
            if total:
                terms[key] = total
            else:
                terms.pop(key, None)
            k += 1
    return Series._raw(terms, profile)


# ── Correction constants ──────────────────────────────────────

def correction_minus(var: str, profile: TruncationProfile) -> Series:
    """(t+1)/(2(t-1)) for |t|<1: -1/2 - sum_{j>=1} t^j."""
    idx = profile.index(var)
    terms = {profile.zero_key: Fraction(-1, 2)}
    for j in range(1, profile.band(var) + 1):
        key = list(profile.zero_key)
        key[idx] = j
        terms[tuple(key)] = Fraction(-1)
    return Series._raw(terms, profile)


def correction_plus(var: str, profile: TruncationProfile) -> Series:
    """(t+1)/(2(t-1)) for |t|>1: +1/2 + sum_{j>=1} t^-j."""
    idx = profile.index(var)
    terms = {profile.zero_key: Fraction(1, 2)}
    for j in range(1, profile.band(var) + 1):
        key = list(profile.zero_key)
        key[idx] = -j
        terms[tuple(key)] = Fraction(1)
    return Series._raw(terms, profile)


def correction_ns_minus(var: str, profile: TruncationProfile) -> Series:
    """t^(1/2)/(t-1) for |t|<1 in the hat variable: -sum_{j>=0} that^(2j+1)."""
    idx = profile.index(var)
    terms = {}
    for j in range(1, profile.band(var) + 1, 2):
        key = list(profile.zero_key)
        key[idx] = j
        terms[tuple(key)] = Fraction(-1)
    return Series._raw(terms, profile)


def correction_ns_plus(var: str, profile: TruncationProfile) -> Series:
    """t^(1/2)/(t-1) for |t|>1 in the hat variable: sum_{j>=0} that^-(2j+1)."""
    idx = profile.index(var)
    terms = {}
    for j in range(1, profile.band(var) + 1, 2):
        key = list(profile.zero_key)
        key[idx] = -j
        terms[tuple(key)] = Fraction(1)
    return Series._raw(terms, profile)


def correction(convention: str, var: str, profile: TruncationProfile,
               odd: bool = False) -> Series:
    """Dispatch on expansion convention (MINUS / PLUS) and fermion type."""
    table = {
        (MINUS, False): correction_minus,
        (PLUS, False): correction_plus,
        (MINUS, True): correction_ns_minus,
        (PLUS, True): correction_ns_plus,
    }
    try:
        return table[(convention, odd)](var, profile)
    except KeyError:
        raise ValueError(f"unknown correction convention: {convention!r}")
