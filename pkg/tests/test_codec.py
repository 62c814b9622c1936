"""
Tests for the canonical text forms of a series.
"""

import json
import os
import sys
from fractions import Fraction

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from ring import codec
from ring.series import (
    MaskConstraint,
    Series,
    SeriesError,
    TruncationProfile,
    constant,
    monomial,
)


@pytest.fixture
def profile():
    return TruncationProfile.build(3, {"t": 3})


@pytest.fixture
def sample(profile):
    return (
        constant(Fraction(-1, 2), profile)
        + monomial((1, 1, 0), profile)
        - monomial((1, -1, 0), profile)
    )


def test_rows_are_graded_lex(sample):
    """Rows come out sorted by (q, t, z) with numerator and denominator as strings"""
    rows = codec.to_rows(sample)
    assert [r["exponents"] for r in rows] == [
        {"q": 0, "z": 0},
        {"q": 1, "t": -1, "z": 0},
        {"q": 1, "t": 1, "z": 0},
    ]
    assert rows[0]["num"] == "-1" and rows[0]["den"] == "2"


def test_csv_layout(sample):
    """CSV has a header naming every variable then one row per term"""
    lines = codec.to_csv(sample).splitlines()
    assert lines[0] == "q,t,z,num,den"
    assert lines[1] == "0,0,0,-1,2"
    assert lines[3] == "1,1,0,1,1"


def test_text_layout(sample):
    """Text form prints every exponent and the exact value"""
    lines = codec.to_text(sample).splitlines()
    assert lines[0] == "q^0 t^0 z^0  -1/2"


def test_json_reads_back(sample, profile):
    """from_json inverts to_json"""
    assert codec.from_json(codec.to_json(sample), profile) == sample


def test_json_is_stable(sample):
    """Identical series serialize byte-identically"""
    assert codec.to_json(sample) == codec.to_json(sample + 0)
    assert json.loads(codec.to_json(sample))[0]["num"] == "-1"


def test_masked_rows_are_omitted(profile):
    """Unreliable coefficients never reach the output"""
    masked = Series({(0, 0, 0): 1, (3, -1, 0): 1}, profile, mask=(MaskConstraint(3, (("t", 1),)),))
    rows = codec.to_rows(masked)
    assert rows == [{"exponents": {"q": 0, "z": 0}, "num": "1", "den": "1"}]


def test_empty_series(profile):
    """A zero series has no rows and an empty text form"""
    zero_series = constant(0, profile)
    assert codec.to_rows(zero_series) == []
    assert codec.to_text(zero_series) == ""


def test_malformed_rows(profile):
    """Rows missing fields or naming foreign variables raise"""
    with pytest.raises(SeriesError):
        codec.from_rows([{"exponents": {"q": 1}}], profile)
    with pytest.raises(SeriesError):
        codec.from_rows([{"exponents": {"q": 1, "s": 2}, "num": "1", "den": "1"}], profile)
