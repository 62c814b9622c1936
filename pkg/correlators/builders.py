"""
correlators/builders.py
Exact q-series of the trace correlators.

All traces reduce to plain sums over partitions: the even Ramond sector has
one basis vector per strict partition, the Neveu-Schwarz space one per odd
strict partition, and every operator involved acts diagonally. For odd
strict partitions the base variable is q^(1/2) and t-variables are t^(1/2).
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Optional, Sequence, Tuple

from partitions.strict import (
    Partition,
    PartitionKind,
    eigen_poly,
    enumerate_partitions,
    max_length,
)
from ring.expansions import MINUS, PLUS, correction, pochhammer_inf
from ring.series import (
    Key,
    Series,
    TruncationProfile,
    mul,
    reciprocal,
)

logger = logging.getLogger(__name__)


class CutoffError(ValueError):
    """Weight cutoff too small for the requested window."""


@dataclass(frozen=True)
class CorrelatorSpec:
    """
    Which correlation function to build.

    normal_ordered: drop the correction constant (:R:, :S:).
    correction: MINUS (|t|<1) or PLUS (|t|>1) expansion, only when not normal ordered.
    z_weighted: weight each partition by z^length (the super refinement).
    """
    kind: PartitionKind
    arity: int = 1
    normal_ordered: bool = True
    correction: str = MINUS
    z_weighted: bool = False

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError(f"arity must be >= 1, got {self.arity}")
        if self.correction not in (MINUS, PLUS):
            raise ValueError(f"unknown correction convention: {self.correction!r}")
        if not self.normal_ordered and self.arity != 1:
            raise ValueError("corrected exact series are built for one-point functions only")

    @property
    def variables(self) -> Tuple[str, ...]:
        return slot_variables(self.arity)

    def build(self, profile: TruncationProfile) -> Series:
        if self.normal_ordered:
            return normal_ordered_npoint(
                self.kind, self.variables, profile, z_weighted=self.z_weighted
            )
        return corrected_onepoint(
            self.kind, self.correction, profile,
            z_weighted=self.z_weighted, var=self.variables[0],
        )


def slot_variables(arity: int) -> Tuple[str, ...]:
    return ("t",) if arity == 1 else tuple(f"t{i}" for i in range(1, arity + 1))


def onepoint_profile(q_max: int, t_band: Optional[int] = None, z_max: int = 0,
                     var: str = "t") -> TruncationProfile:
    """Window for a one-point function; the band defaults to q_max."""
    band = q_max if t_band is None else t_band
    return TruncationProfile.build(q_max, {var: band}, z_max)


def npoint_profile(arity: int, q_max: int, t_band: Optional[int] = None) -> TruncationProfile:
    band = q_max if t_band is None else t_band
    return TruncationProfile.build(q_max, {v: band for v in slot_variables(arity)})


def _step(kind: PartitionKind) -> int:
    return 2 if kind.is_odd else 1


def _base_key(profile: TruncationProfile, q: int = 0, z: int = 0, **t: int) -> Key:
    return (q,) + tuple(t.get(v, 0) for v in profile.variables) + (z,)


def generating_function(kind: PartitionKind, profile: TruncationProfile,
                        z_weighted: bool = False, sign: int = 1) -> Series:
    """
    sum over partitions of (sign*z)^length * q^weight:
    (-q;q)_inf for strict, prod_k (1 + q^(2k+1)) for odd strict, (q;q)_inf at sign -1.
    """
    base = _base_key(profile, q=1, z=1 if z_weighted else 0)
    return pochhammer_inf(base, sign, _step(kind), profile)


def partition_sum(kind: PartitionKind, profile: TruncationProfile,
                  weight_fn: Callable[[Partition], Optional[Series]],
                  z_weighted: bool = False, sign: int = 1,
                  weight_cutoff: Optional[int] = None) -> Series:
    """
    sum_lambda weight_fn(lambda) * q^|lambda| (* z^length), accumulated exactly.

    weight_fn returns a series in `profile` (or None for zero).
    """
    cutoff = profile.q_max if weight_cutoff is None else weight_cutoff
    if cutoff < profile.q_max:
        raise CutoffError(
            f"weight cutoff {cutoff} is below the q-order {profile.q_max}"
        )
    acc: Dict[Key, Fraction] = {}
    zero_key = profile.zero_key
    count = 0
    for lam in enumerate_partitions(kind, profile.q_max):
        length = lam.length
        if z_weighted and length > profile.z_max:
            continue
        value = weight_fn(lam)
        if value is None or value.is_zero():
            continue
        count += 1
        shift = list(zero_key)
        shift[0] = lam.weight
        if z_weighted:
            shift[-1] = length
        c = Fraction(sign) ** length
        for k, v in value.shift_by(tuple(shift), c).terms.items():
            acc[k] = acc.get(k, 0) + v
    logger.debug("partition_sum(%s): %d contributing partitions", kind.value, count)
    return Series._raw({k: v for k, v in acc.items() if v}, profile)


def expectation(kind: PartitionKind, f: Callable[[Partition], Optional[Series]],
                weight_cutoff: int, profile: TruncationProfile,
                normalized: bool = True) -> Series:
    """
    <f>_q = (partition generating function)^-1 * sum_lambda f(lambda) q^|lambda|.

    Args:
        kind: partition set summed over.
        f: per-partition series-valued function.
        weight_cutoff: largest weight enumerated; must reach profile.q_max.
        profile: output window.
        normalized: False returns the raw partition sum.
    """
    raw = partition_sum(kind, profile, f, weight_cutoff=weight_cutoff)
    if not normalized:
        return raw
    return mul(raw, reciprocal(generating_function(kind, profile)))


def normal_ordered_npoint(kind: PartitionKind, variables: Sequence[str],
                          profile: TruncationProfile,
                          weight_cutoff: Optional[int] = None,
                          z_weighted: bool = False, sign: int = 1) -> Series:
    """sum_lambda q^|lambda| prod_i F(lambda; t_i): the series of :R: or :S:."""
    if not variables:
        raise ValueError("normal_ordered_npoint needs at least one t-variable")

    def eigen_product(lam: Partition) -> Optional[Series]:
        if not lam.parts:
            return None
        value = eigen_poly(lam, variables[0], profile)
        for var in variables[1:]:
            value = mul(value, eigen_poly(lam, var, profile))
        return value

    return partition_sum(
        kind, profile, eigen_product,
        z_weighted=z_weighted, sign=sign, weight_cutoff=weight_cutoff,
    )


def corrected_onepoint(kind: PartitionKind, convention: str, profile: TruncationProfile,
                       z_weighted: bool = False, var: str = "t") -> Series:
    """
    R = :R: + c(t) * (-q;q)_inf, or S = :S: + d(t) * prod(1 + q^(2k+1)), with the
    correction expanded per `convention`. With z_weighted the partition sum
    carries z^length and the prefactor becomes (-qz; ...)_inf.
    """
    if convention not in (MINUS, PLUS):
        raise ValueError(f"unknown correction convention: {convention!r}")
    normal = normal_ordered_npoint(kind, (var,), profile, z_weighted=z_weighted)
    corr = correction(convention, var, profile, odd=kind.is_odd)
    return normal + mul(generating_function(kind, profile, z_weighted=z_weighted), corr)


def alternating_onepoint(kind: PartitionKind, convention: str, profile: TruncationProfile,
                         var: str = "t") -> Series:
    """
    The z -> -1 specialization of the z-weighted corrected function (R-minus,
    S-minus). z-order is sized so no partition length in the window is lost.
    """
    z_order = max_length(kind, profile.q_max)
    weighted = corrected_onepoint(
        kind, convention, profile.with_z_max(z_order), z_weighted=True, var=var
    )
    return weighted.specialize_z(-1)


def build(spec: CorrelatorSpec, profile: TruncationProfile) -> Series:
    return spec.build(profile)


__all__ = [
    "MINUS",
    "PLUS",
    "CorrelatorSpec",
    "CutoffError",
    "alternating_onepoint",
    "build",
    "corrected_onepoint",
    "expectation",
    "generating_function",
    "normal_ordered_npoint",
    "npoint_profile",
    "onepoint_profile",
    "partition_sum",
    "slot_variables",
]
