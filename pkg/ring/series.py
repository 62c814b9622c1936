"""
ring/series.py
Exact truncated Laurent series in a base grading variable q, named
t-variables and z, with Fraction coefficients.

Keys are packed tuples (q, t_1, ..., t_k, z) in the profile's declaration
order, so tuple order is the graded-lexicographic term order.
"""

import logging
import operator
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from verification.reports import CheckReport

logger = logging.getLogger(__name__)

Key = Tuple[int, ...]
Scalar = Union[int, Fraction]

RESERVED_NAMES = {"q", "z"}


# ── Errors ────────────────────────────────────────────────────

class SeriesError(ValueError):
    """Base error for series arithmetic."""


class ProfileMismatchError(SeriesError):
    """Operands live in different truncation profiles."""


class MaskedOperandError(SeriesError):
    """Operation is not defined for masked series."""


class MaskedKeyError(SeriesError):
    """Coefficient requested at a key whose value is unreliable."""


class InadmissibleExpansionError(SeriesError):
    """Expansion direction is ill-defined for the given monomial."""


class NonInvertibleError(SeriesError):
    """Series has no inverse within the ring."""


# ── Exponents and profiles ────────────────────────────────────

@dataclass(frozen=True)
class ExponentKey:
    """A monomial q^q_exp * prod t_v^e_v * z^z_exp. Absent t entries are 0."""
    q_exp: int = 0
    t_exps: Tuple[Tuple[str, int], ...] = ()
    z_exp: int = 0

    @classmethod
    def of(cls, q: int = 0, z: int = 0, **t_exps: int) -> "ExponentKey":
        items = tuple(sorted((name, e) for name, e in t_exps.items() if e))
        return cls(q_exp=q, t_exps=items, z_exp=z)

    def t(self, var: str) -> int:
        for name, e in self.t_exps:
            if name == var:
                return e
        return 0

    def as_dict(self) -> Dict[str, int]:
        out = {"q": self.q_exp}
        out.update(dict(self.t_exps))
        out["z"] = self.z_exp
        return out


@dataclass(frozen=True)
class TruncationProfile:
    """
    Retained window: 0 <= q <= q_max, -M_v <= t_v <= M_v, 0 <= z <= z_max.
    t_band is an ordered tuple of (variable, M) pairs.
    """
    q_max: int
    t_band: Tuple[Tuple[str, int], ...] = ()
    z_max: int = 0

    def __post_init__(self):
        if self.q_max < 0 or self.z_max < 0:
            raise SeriesError(f"negative order in profile: q_max={self.q_max} z_max={self.z_max}")
        names = [name for name, _ in self.t_band]
        if len(set(names)) != len(names):
            raise SeriesError(f"duplicate t-variables: {names}")
        for name, band in self.t_band:
            if name in RESERVED_NAMES:
                raise SeriesError(f"'{name}' is reserved and cannot name a t-variable")
            if band < 0:
                raise SeriesError(f"negative band for {name}: {band}")

    @classmethod
    def build(cls, q_max: int, t_band: Optional[Mapping[str, int]] = None,
              z_max: int = 0) -> "TruncationProfile":
        return cls(q_max=q_max, t_band=tuple((t_band or {}).items()), z_max=z_max)

    @property
    def variables(self) -> Tuple[str, ...]:
        return tuple(name for name, _ in self.t_band)

    @property
    def width(self) -> int:
        return len(self.t_band) + 2

    @property
    def zero_key(self) -> Key:
        return (0,) * self.width

    def band(self, var: str) -> int:
        return dict(self.t_band)[var]

    def index(self, var: str) -> int:
        try:
            return 1 + self.variables.index(var)
        except ValueError:
            raise SeriesError(f"unknown t-variable '{var}' (profile has {self.variables})")

    def pack(self, key: ExponentKey) -> Key:
        known = set(self.variables)
        for name, _ in key.t_exps:
            if name not in known:
                raise SeriesError(f"unknown t-variable '{name}' (profile has {self.variables})")
        return (key.q_exp,) + tuple(key.t(v) for v in self.variables) + (key.z_exp,)

    def unpack(self, key: Key) -> ExponentKey:
        t_exps = {v: e for v, e in zip(self.variables, key[1:-1])}
        return ExponentKey.of(q=key[0], z=key[-1], **t_exps)

    def contains(self, key: Key) -> bool:
        if not 0 <= key[0] <= self.q_max or not 0 <= key[-1] <= self.z_max:
            return False
        for (_, band), e in zip(self.t_band, key[1:-1]):
            if e > band or e < -band:
                return False
        return True

    def within(self, other: "TruncationProfile") -> bool:
        """True if this window is inside `other` (same variables, smaller bounds)."""
        if self.variables != other.variables:
            return False
        return (
            self.q_max <= other.q_max
            and self.z_max <= other.z_max
            and all(b <= ob for (_, b), (_, ob) in zip(self.t_band, other.t_band))
        )

    def with_z_max(self, z_max: int) -> "TruncationProfile":
        return TruncationProfile(self.q_max, self.t_band, z_max)

    def padded(self, extra_band: int) -> "TruncationProfile":
        return TruncationProfile(
            self.q_max, tuple((v, b + extra_band) for v, b in self.t_band), self.z_max
        )

    def describe(self) -> Dict[str, object]:
        return {"q_max": self.q_max, "t_band": dict(self.t_band), "z_max": self.z_max}


@dataclass(frozen=True)
class MaskConstraint:
    """Reliable region q <= bound + sum(c_v * t_v)."""
    bound: int
    coeffs: Tuple[Tuple[str, int], ...] = ()

    def admits(self, key: Key, profile: TruncationProfile) -> bool:
        limit = self.bound
        for var, c in self.coeffs:
            limit += c * key[profile.index(var)]
        return key[0] <= limit

    def describe(self) -> str:
        terms = " ".join(f"{c:+d}*{v}" for v, c in self.coeffs)
        return f"q <= {self.bound} {terms}".rstrip()


# ── Series ────────────────────────────────────────────────────

class Series:
    """
    Immutable sparse series. `mask` lists constraints outside of which stored
    coefficients are meaningless and must never be compared.
    """

    __slots__ = ("_terms", "profile", "mask")

    def __init__(self, terms: Mapping[Key, Scalar], profile: TruncationProfile,
                 mask: Sequence[MaskConstraint] = ()):
        clean: Dict[Key, Fraction] = {}
        for key, value in terms.items():
            key = tuple(key)
            if len(key) != profile.width or not profile.contains(key):
                raise SeriesError(f"key {key} outside profile {profile.describe()}")
            if value:
                clean[key] = Fraction(value)
        self._terms = clean
        self.profile = profile
        self.mask = tuple(mask)

    @classmethod
    def _raw(cls, terms: Dict[Key, Fraction], profile: TruncationProfile,
             mask: Sequence[MaskConstraint] = ()) -> "Series":
        # trusted constructor: keys already in profile, zeros already pruned
        obj = cls.__new__(cls)
        obj._terms = terms
        obj.profile = profile
        obj.mask = tuple(mask)
        return obj

    # ── Introspection ─────────────────────────────────────────

    @property
    def terms(self) -> Mapping[Key, Fraction]:
        return MappingProxyType(self._terms)

    @property
    def is_masked(self) -> bool:
        return bool(self.mask)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def items(self) -> List[Tuple[Key, Fraction]]:
        """Terms in graded-lexicographic order."""
        return sorted(self._terms.items())

    def reliable(self, key: Key) -> bool:
        return all(c.admits(key, self.profile) for c in self.mask)

    def coeff(self, key: Union[ExponentKey, Key]) -> Fraction:
        return coeff(self, key)

    def q_slice(self, q_exp: int) -> Dict[Key, Fraction]:
        return {k: v for k, v in self._terms.items() if k[0] == q_exp}

    # ── Arithmetic ────────────────────────────────────────────

    def __add__(self, other):
        if isinstance(other, Series):
            return add(self, other)
        return add(self, constant(other, self.profile))

    def __radd__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        return self.__add__(other)

    def __neg__(self):
        return scale(self, -1)

    def __sub__(self, other):
        if isinstance(other, Series):
            return add(self, -other)
        return add(self, constant(-Fraction(other), self.profile))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, Series):
            return mul(self, other)
        return scale(self, other)

    def __rmul__(self, other):
        return scale(self, other)

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return (
            self.profile == other.profile
            and self.mask == other.mask
            and self._terms == other._terms
        )

    __hash__ = None

    def __repr__(self):
        return f"Series({format_series(self, limit=8)!s}, q_max={self.profile.q_max})"

    # ── Structural maps ───────────────────────────────────────

    def restrict(self, profile: TruncationProfile) -> "Series":
        if profile.variables != self.profile.variables:
            raise ProfileMismatchError(
                f"cannot restrict {self.profile.variables} to {profile.variables}"
            )
        kept = {k: v for k, v in self._terms.items() if profile.contains(k)}
        return Series._raw(kept, profile, self.mask)

    def shift_by(self, key: Union[ExponentKey, Key], coefficient: Scalar = 1) -> "Series":
        """Multiply by coefficient * monomial(key)."""
        _require_unmasked(self, "shift_by")
        packed = self.profile.pack(key) if isinstance(key, ExponentKey) else tuple(key)
        c = Fraction(coefficient)
        contains = self.profile.contains
        out = {}
        for k, v in self._terms.items():
            nk = tuple(map(operator.add, k, packed))
            if contains(nk):
                out[nk] = v * c
        return Series._raw({k: v for k, v in out.items() if v}, self.profile)

    def reflect(self, var: str) -> "Series":
        """Substitute t_var -> 1/t_var."""
        idx = self.profile.index(var)
        out = {}
        for k, v in self._terms.items():
            nk = list(k)
            nk[idx] = -nk[idx]
            out[tuple(nk)] = v
        mask = tuple(
            MaskConstraint(c.bound, tuple((w, -a if w == var else a) for w, a in c.coeffs))
            for c in self.mask
        )
        return Series._raw(out, self.profile, mask)

    def rename(self, mapping: Mapping[str, str]) -> "Series":
        """Permute t-variables: the value at variable v moves to mapping[v]."""
        _require_unmasked(self, "rename")
        names = self.profile.variables
        positions = [names.index(mapping.get(v, v)) for v in names]
        out = {}
        for k, v in self._terms.items():
            t = [0] * len(names)
            for src, dst in enumerate(positions):
                t[dst] = k[1 + src]
            out[(k[0],) + tuple(t) + (k[-1],)] = v
        profile = self.profile
        if any(profile.band(v) != profile.band(mapping.get(v, v)) for v in names):
            raise SeriesError("renamed variables must share a band")
        return Series._raw(out, profile, self.mask)

    def t_derivative(self, var: str) -> "Series":
        return t_derivative(self, var)

    def specialize_z(self, value: Scalar) -> "Series":
        """Substitute z -> value; the result lives in the same window with z_max = 0."""
        _require_unmasked(self, "specialize_z")
        v = Fraction(value)
        out: Dict[Key, Fraction] = {}
        for k, c in self._terms.items():
            nk = k[:-1] + (0,)
            out[nk] = out.get(nk, Fraction(0)) + c * v ** k[-1]
        return Series._raw({k: c for k, c in out.items() if c}, self.profile.with_z_max(0))

    def unmasked(self) -> "Series":
        """Same terms without the mask; caller asserts the masked region is irrelevant."""
        return Series._raw(self._terms, self.profile)


# ── Constructors ──────────────────────────────────────────────

def zero(profile: TruncationProfile) -> Series:
    return Series._raw({}, profile)


def constant(value: Scalar, profile: TruncationProfile) -> Series:
    value = Fraction(value)
    return Series._raw({profile.zero_key: value} if value else {}, profile)


def monomial(key: Union[ExponentKey, Key], profile: TruncationProfile,
             coefficient: Scalar = 1) -> Series:
    """coefficient * key, or zero if the key falls outside the window."""
    packed = profile.pack(key) if isinstance(key, ExponentKey) else tuple(key)
    c = Fraction(coefficient)
    if not c or not profile.contains(packed):
        return zero(profile)
    return Series._raw({packed: c}, profile)


# ── Core operations ───────────────────────────────────────────

def _require_same_profile(a: Series, b: Series):
    if a.profile != b.profile:
        raise ProfileMismatchError(
            f"profile mismatch: {a.profile.describe()} vs {b.profile.describe()}"
        )


def _require_unmasked(s: Series, op: str):
    if s.mask:
        raise MaskedOperandError(f"{op} is not defined for masked series")


def add(a: Series, b: Series) -> Series:
    """Coefficientwise sum; masks are combined."""
    _require_same_profile(a, b)
    out = dict(a._terms)
    for k, v in b._terms.items():
        s = out.get(k, 0) + v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    mask = a.mask + tuple(c for c in b.mask if c not in a.mask)
    return Series._raw(out, a.profile, mask)


def scale(s: Series, c: Scalar) -> Series:
    c = Fraction(c)
    if not c:
        return Series._raw({}, s.profile, s.mask)
    return Series._raw({k: v * c for k, v in s._terms.items()}, s.profile, s.mask)


def _convolve(a: Mapping[Key, Fraction], b: Mapping[Key, Fraction],
              profile: TruncationProfile) -> Dict[Key, Fraction]:
    q_max = profile.q_max
    contains = profile.contains
    right = sorted(b.items())
    out: Dict[Key, Fraction] = {}
    for ka, va in a.items():
        room = q_max - ka[0]
        for kb, vb in right:
            if kb[0] > room:
                break
            k = tuple(map(operator.add, ka, kb))
            if contains(k):
                out[k] = out.get(k, 0) + va * vb
    return {k: v for k, v in out.items() if v}


def mul(a: Series, b: Series) -> Series:
    """Truncated product; keys outside the profile are dropped."""
    _require_same_profile(a, b)
    _require_unmasked(a, "mul")
    _require_unmasked(b, "mul")
    return Series._raw(_convolve(a._terms, b._terms, a.profile), a.profile)


def product(factors: Sequence[Series], profile: TruncationProfile) -> Series:
    result = constant(1, profile)
    for f in factors:
        result = mul(result, f)
    return result


def coeff(s: Series, key: Union[ExponentKey, Key]) -> Fraction:
    packed = s.profile.pack(key) if isinstance(key, ExponentKey) else tuple(key)
    if not s.profile.contains(packed):
        raise SeriesError(f"key {packed} outside profile {s.profile.describe()}")
    if not s.reliable(packed):
        raise MaskedKeyError(f"coefficient at {s.profile.unpack(packed).as_dict()} is masked")
    return s._terms.get(packed, Fraction(0))


def t_derivative(s: Series, var: str) -> Series:
    """t_var d/dt_var: each coefficient times its t_var exponent."""
    idx = s.profile.index(var)
    out = {k: v * k[idx] for k, v in s._terms.items() if k[idx]}
    return Series._raw(out, s.profile, s.mask)


def eq_on_window(a: Series, b: Series, window: Optional[TruncationProfile] = None,
                 identity: str = "eq_on_window", params: Optional[dict] = None) -> CheckReport:
    """
    Compare every coefficient inside `window` that both masks admit.

    Returns:
        CheckReport with the first mismatching monomial (graded-lex order)
        and both values, or a pass.
    """
    window = window or a.profile
    if not window.within(a.profile) or not window.within(b.profile):
        raise ProfileMismatchError(
            f"window {window.describe()} is not inside both operand profiles"
        )
    report = CheckReport(identity=identity, params=dict(params or {}))
    report.params.setdefault("window", window.describe())
    keys = sorted(set(a._terms) | set(b._terms))
    compared = 0
    for key in keys:
        if not window.contains(key) or not a.reliable(key) or not b.reliable(key):
            continue
        compared += 1
        lhs = a._terms.get(key, Fraction(0))
        rhs = b._terms.get(key, Fraction(0))
        if lhs != rhs:
            report.mismatch = {
                "key": window.unpack(key).as_dict(),
                "lhs": str(lhs),
                "rhs": str(rhs),
            }
            report.compared = compared
            logger.warning("%s: mismatch at %s (%s vs %s)", identity, report.mismatch["key"], lhs, rhs)
            return report
    report.passed = True
    report.compared = compared
    return report


# ── Expansions needing an inverse ─────────────────────────────

def _check_admissible(key: Key, what: str):
    """q >= 1; or q = 0 with t >= 0 and something positive."""
    if key[0] >= 1:
        return
    if key[0] < 0:
        raise InadmissibleExpansionError(f"{what}: negative q exponent in {key}")
    t_exps = key[1:-1]
    if any(e < 0 for e in t_exps):
        raise InadmissibleExpansionError(
            f"{what}: monomial {key} has q-degree 0 and a negative t-exponent"
        )
    if not any(t_exps) and key[-1] < 1:
        raise InadmissibleExpansionError(f"{what}: constant monomial {key} has no expansion")


def inverse_geometric(m: Union[ExponentKey, Key], profile: TruncationProfile,
                      coefficient: Scalar = 1) -> Series:
    """Expansion of 1/(1 - coefficient*m) as sum_k (coefficient*m)^k, truncated."""
    packed = profile.pack(m) if isinstance(m, ExponentKey) else tuple(m)
    _check_admissible(packed, "inverse_geometric")
    c = Fraction(coefficient)
    out: Dict[Key, Fraction] = {}
    k = 0
    power = Fraction(1)
    while True:
        key = tuple(k * e for e in packed)
        if not profile.contains(key):
            break
        if power:
            out[key] = power
        k += 1
        power *= c
    return Series._raw(out, profile)


def reciprocal(s: Series) -> Series:
    """
    Exact inverse. The q^0 slice is inverted by a terminating Neumann series
    (its non-constant part must be admissible); higher slices follow from
    r_n = -s_0^{-1} * sum_{j=1..n} s_j r_{n-j}.
    """
    _require_unmasked(s, "reciprocal")
    profile = s.profile
    zero_key = profile.zero_key
    c0 = s._terms.get(zero_key)
    if not c0:
        raise NonInvertibleError("series has zero constant term")

    slices: Dict[int, Dict[Key, Fraction]] = {}
    for k, v in s._terms.items():
        slices.setdefault(k[0], {})[k] = v

    rest = {}
    for k, v in slices.get(0, {}).items():
        if k == zero_key:
            continue
        _check_admissible(k, "reciprocal")
        rest[k] = -v / c0

    inv0: Dict[Key, Fraction] = {zero_key: Fraction(1)}
    power: Dict[Key, Fraction] = {zero_key: Fraction(1)}
    while rest:
        power = _convolve(power, rest, profile)
        if not power:
            break
        for k, v in power.items():
            inv0[k] = inv0.get(k, 0) + v
    inv0 = {k: v / c0 for k, v in inv0.items() if v}

    result: Dict[int, Dict[Key, Fraction]] = {0: inv0}
    for n in range(1, profile.q_max + 1):
        acc: Dict[Key, Fraction] = {}
        for j in range(1, n + 1):
            if j not in slices or not result.get(n - j):
                continue
            for k, v in _convolve(slices[j], result[n - j], profile).items():
                acc[k] = acc.get(k, 0) + v
        acc = {k: v for k, v in acc.items() if v}
        if acc:
            result[n] = {k: -v for k, v in _convolve(inv0, acc, profile).items()}

    terms: Dict[Key, Fraction] = {}
    for part in result.values():
        terms.update(part)
    return Series._raw(terms, profile)


def log_derivative(factors: Sequence[Tuple[int, Series]], var: str) -> Series:
    """
    t d/dt of sum(sign * log(F)) as sum(sign * (t dF/dt) / F).

    Args:
        factors: (sign, series) pairs sharing one profile, each with a
                 non-zero constant term.
        var: the t-variable the derivative acts on.
    """
    if not factors:
        raise SeriesError("log_derivative needs at least one factor")
    profile = factors[0][1].profile
    total = zero(profile)
    for sign, f in factors:
        _require_unmasked(f, "log_derivative")
        term = mul(t_derivative(f, var), reciprocal(f))
        total = add(total, term if sign > 0 else -term)
    return total


# ── Formatting ────────────────────────────────────────────────

def format_monomial(key: Key, profile: TruncationProfile) -> str:
    parts = []
    names = ("q",) + profile.variables + ("z",)
    for name, e in zip(names, key):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts) or "1"


def format_series(s: Series, limit: Optional[int] = None) -> str:
    items: Iterator = iter(s.items())
    chunks = []
    for i, (key, value) in enumerate(items):
        if limit is not None and i >= limit:
            chunks.append("...")
            break
        mono = format_monomial(key, s.profile)
        chunks.append(f"({value})" if mono == "1" else f"({value})*{mono}")
    return " + ".join(chunks) or "0"
