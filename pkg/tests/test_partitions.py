"""
Tests for strict and odd strict partition streams and eigenvalue polynomials.
"""

import os
import sys
import unittest

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from correlators.builders import generating_function
from partitions.strict import (
    Partition,
    PartitionKind,
    count_table,
    eigen_poly,
    enumerate_partitions,
    max_length,
    partitions_of_weight,
)
from ring.series import TruncationProfile

STRICT = PartitionKind.STRICT
ODD = PartitionKind.ODD_STRICT


# ==============================================================================
# Partition objects
# ==============================================================================

class TestPartition(unittest.TestCase):

    def test_weight_and_length(self):
        """|lambda| and l(lambda)"""
        lam = Partition((5, 3, 1))
        self.assertEqual(lam.weight, 9)
        self.assertEqual(lam.length, 3)
        self.assertEqual(str(lam), "5,3,1")

    def test_part_past_length_is_zero(self):
        """lambda_j = 0 for j beyond the length"""
        lam = Partition((4, 2))
        self.assertEqual(lam.part(1), 4)
        self.assertEqual(lam.part(3), 0)

    def test_rejects_repeated_parts(self):
        """Parts must be strictly decreasing"""
        with self.assertRaises(ValueError):
            Partition((3, 3))
        with self.assertRaises(ValueError):
            Partition((1, 2))

    def test_rejects_nonpositive_parts(self):
        """Zero parts are not allowed"""
        with self.assertRaises(ValueError):
            Partition((2, 0))

    def test_odd_kind_rejects_even_parts(self):
        """Odd strict partitions have odd parts only"""
        with self.assertRaises(ValueError):
            Partition((4, 1), ODD)

    def test_kind_values(self):
        """CLI spellings of the kinds"""
        self.assertEqual(PartitionKind("strict"), STRICT)
        self.assertEqual(PartitionKind("odd-strict"), ODD)
        self.assertTrue(ODD.is_odd)


# ==============================================================================
# Enumeration
# ==============================================================================

def test_order_within_weight():
    """Lexicographically descending inside one weight"""
    parts = [p.parts for p in partitions_of_weight(STRICT, 6)]
    assert parts == [(6,), (5, 1), (4, 2), (3, 2, 1)]


def test_stream_starts_with_empty_partition():
    """Weight 0 contributes the empty partition"""
    first = next(enumerate_partitions(STRICT, 3))
    assert first.parts == ()


def test_stream_is_ordered_by_weight():
    """Weights never decrease along the stream"""
    weights = [p.weight for p in enumerate_partitions(ODD, 15)]
    assert weights == sorted(weights)


def test_negative_max_weight():
    """Negative weights are rejected"""
    with pytest.raises(ValueError):
        list(enumerate_partitions(STRICT, -1))


def test_strict_counts():
    """Distinct-part counts for small weights"""
    assert count_table(STRICT, 5) == [1, 1, 1, 2, 2, 3]


def test_odd_strict_counts():
    """Odd distinct-part counts for small weights"""
    assert count_table(ODD, 10) == [1, 1, 0, 1, 1, 1, 1, 1, 2, 2, 2]


@pytest.mark.parametrize("kind", [STRICT, ODD])
def test_counts_match_generating_function(kind):
    """Enumeration agrees with the product formula"""
    weight = 30
    gf = generating_function(kind, TruncationProfile.build(weight))
    assert count_table(kind, weight) == [gf.coeff((n, 0)) for n in range(weight + 1)]


def test_max_length():
    """Longest partition that fits a given weight"""
    assert max_length(STRICT, 6) == 3
    assert max_length(STRICT, 5) == 2
    assert max_length(ODD, 9) == 3
    assert max_length(ODD, 8) == 2


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 18), st.sampled_from([STRICT, ODD]))
def test_every_streamed_partition_is_valid(n, kind):
    """Each partition of weight n is strict, of the right parity and sums to n"""
    for lam in partitions_of_weight(kind, n):
        assert lam.weight == n
        assert all(a > b for a, b in zip(lam.parts, lam.parts[1:]))
        if kind is ODD:
            assert all(p % 2 for p in lam.parts)


# ==============================================================================
# Eigenvalue polynomials
# ==============================================================================

def test_eigen_poly():
    """F((3,1); t) = t^3 - t^-3 + t - t^-1"""
    profile = TruncationProfile.build(4, {"t": 4})
    f = eigen_poly(Partition((3, 1)), "t", profile)
    assert f.terms == {(0, 3, 0): 1, (0, -3, 0): -1, (0, 1, 0): 1, (0, -1, 0): -1}


def test_eigen_poly_drops_out_of_band():
    """Parts larger than the band contribute nothing"""
    profile = TruncationProfile.build(6, {"t": 2})
    f = eigen_poly(Partition((5, 1)), "t", profile)
    assert f.terms == {(0, 1, 0): 1, (0, -1, 0): -1}


def test_eigen_poly_is_antisymmetric():
    """F(lambda; 1/t) = -F(lambda; t)"""
    profile = TruncationProfile.build(6, {"t": 6})
    f = eigen_poly(Partition((6, 2, 1)), "t", profile)
    assert f.reflect("t") == -f
