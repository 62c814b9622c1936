"""
partitions/strict.py
Streams of strict and odd strict partitions, ordered by weight and
lexicographically descending within a weight, plus the eigenvalue
polynomial F(lambda; t) = sum_k (t^lambda_k - t^-lambda_k).
"""

import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, List, Tuple

from ring.series import Series, TruncationProfile

logger = logging.getLogger(__name__)


class PartitionKind(Enum):
    """Strict partitions (integer modes) or odd strict partitions (half-integer modes)."""
    STRICT = "strict"
    ODD_STRICT = "odd-strict"

    @property
    def is_odd(self) -> bool:
        return self is PartitionKind.ODD_STRICT


@dataclass(frozen=True)
class Partition:
    parts: Tuple[int, ...] = ()
    kind: PartitionKind = PartitionKind.STRICT

    def __post_init__(self):
        parts = tuple(self.parts)
        object.__setattr__(self, "parts", parts)
        if any(p <= 0 for p in parts):
            raise ValueError(f"parts must be positive: {parts}")
        if any(a <= b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"parts must be strictly decreasing: {parts}")
        if self.kind.is_odd and any(p % 2 == 0 for p in parts):
            raise ValueError(f"odd strict partition has an even part: {parts}")

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def part(self, j: int) -> int:
        """lambda_j (1-based), 0 beyond the length."""
        return self.parts[j - 1] if 1 <= j <= len(self.parts) else 0

    def __iter__(self):
        return iter(self.parts)

    def __str__(self):
        return ",".join(str(p) for p in self.parts)


def _descending(n: int, max_part: int, step: int) -> Iterator[Tuple[int, ...]]:
    """Distinct parts <= max_part of the right parity summing to n, largest first."""
    if n == 0:
        yield ()
        return
    first = min(n, max_part)
    if step == 2 and first % 2 == 0:
        first -= 1
    for p in range(first, 0, -step):
        # largest possible sum of distinct admissible parts below p
        below = (p - 1) * p // 2 if step == 1 else ((p - 1) // 2) ** 2
        if p + below < n:
            break
        for rest in _descending(n - p, p - step, step):
            yield (p,) + rest


def partitions_of_weight(kind: PartitionKind, n: int) -> Iterator[Partition]:
    step = 2 if kind.is_odd else 1
    for parts in _descending(n, n, step):
        yield Partition(parts, kind)


def enumerate_partitions(kind: PartitionKind, max_weight: int) -> Iterator[Partition]:
    """Every partition of the kind with weight <= max_weight, empty partition first."""
    if max_weight < 0:
        raise ValueError(f"max_weight must be >= 0, got {max_weight}")
    for n in range(max_weight + 1):
        yield from partitions_of_weight(kind, n)


def count_table(kind: PartitionKind, max_weight: int) -> List[int]:
    """counts[n] = number of partitions of the kind of weight n, by enumeration."""
    counts = Counter(p.weight for p in enumerate_partitions(kind, max_weight))
    return [counts.get(n, 0) for n in range(max_weight + 1)]


def max_length(kind: PartitionKind, weight: int) -> int:
    """Longest partition of the kind with weight <= `weight`."""
    length = 0
    while True:
        smallest = (length + 1) ** 2 if kind.is_odd else (length + 1) * (length + 2) // 2
        if smallest > weight:
            return length
        length += 1


def eigen_poly(partition: Partition, var: str, profile: TruncationProfile) -> Series:
    """F(lambda; t) in variable `var`; monomials beyond the band are dropped."""
    idx = profile.index(var)
    band = profile.band(var)
    zero_key = profile.zero_key
    terms = {}
    for p in partition.parts:
        if p > band:
            continue
        for e, c in ((p, 1), (-p, -1)):
            key = list(zero_key)
            key[idx] = e
            terms[tuple(key)] = Fraction(c)
    return Series._raw(terms, profile)
