"""
Tests for numeric evaluation, theta functions and residual checks.
mpmath serves as an independent oracle for theta values.
"""

import cmath
import os
import sys
import unittest

import mpmath
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numeric.checks as checks_module
from correlators.builders import onepoint_profile
from numeric.checks import (
    DifferenceEquationSpec,
    MergePattern,
    check_b_shift,
    check_difference_equation,
    check_pole_residue,
    check_quasi_periodicity,
    check_series_consistency,
    check_theta_reflection,
    check_triple_product,
    default_difference_points,
)
from numeric.evaluation import (
    STREAM,
    AnnulusError,
    EvalConfig,
    EvaluationError,
    PoleProximityError,
    TailToleranceError,
    decay_rate,
    eval_correlator,
    evaluate_series,
    format_complex,
    parse_complex,
)
from numeric.theta import PRODUCT_ROUTE, b_function, qpochhammer, theta
from partitions.strict import PartitionKind
from ring.series import TruncationProfile, constant, monomial


@pytest.fixture
def cfg():
    return EvalConfig()


# ==============================================================================
# Parsing and formatting
# ==============================================================================

class TestComplexText(unittest.TestCase):

    def test_parse_forms(self):
        """a+bi, a-bi, bi and plain reals"""
        self.assertEqual(parse_complex("0.2+0.05i"), complex(0.2, 0.05))
        self.assertEqual(parse_complex("1.4"), complex(1.4))
        self.assertEqual(parse_complex("0.9-0.28i"), complex(0.9, -0.28))
        self.assertEqual(parse_complex("2i"), 2j)

    def test_parse_rejects_garbage(self):
        """Non-numeric text raises ValueError"""
        with self.assertRaises(ValueError):
            parse_complex("abc")

    def test_format(self):
        """Reals print without an imaginary part"""
        self.assertEqual(format_complex(1.5 + 0j), "1.5")
        self.assertEqual(format_complex(complex(0.2, -0.05)), "0.2-0.05i")


# ==============================================================================
# Configuration and guards
# ==============================================================================

def test_config_validation():
    """Bad numeric settings are rejected up front"""
    with pytest.raises(ValueError):
        EvalConfig(weight_cutoff=0)
    with pytest.raises(ValueError):
        EvalConfig(weight_cutoff=100, max_cutoff=50)
    with pytest.raises(ValueError):
        EvalConfig(tolerance=0)
    with pytest.raises(ValueError):
        EvalConfig(method="guess")


def test_annulus_guard(cfg):
    """|t| must stay inside |q| < |t| < 1/|q|"""
    with pytest.raises(AnnulusError):
        eval_correlator("R", 0.5, [0.3], cfg)
    with pytest.raises(AnnulusError):
        eval_correlator("R", 0.5, [2.5], cfg)
    with pytest.raises(AnnulusError):
        eval_correlator("R", 1.0, [], cfg)


def test_pole_guard(cfg):
    """t = 1 is a pole"""
    with pytest.raises(PoleProximityError):
        eval_correlator("R", 0.2, [1.0], cfg)


def test_unknown_function(cfg):
    """Only R, R-, S and S- are evaluated"""
    with pytest.raises(EvaluationError):
        eval_correlator("T", 0.2, [1.5], cfg)


def test_fixed_cutoff_too_small():
    """Without adaptive growth a short cutoff is an error"""
    tight = EvalConfig(weight_cutoff=5, adaptive=False)
    with pytest.raises(TailToleranceError):
        eval_correlator("R", 0.5, [1.5], tight)


def test_adaptive_cap():
    """Adaptive growth stops at max_cutoff"""
    capped = EvalConfig(weight_cutoff=5, max_cutoff=10)
    with pytest.raises(TailToleranceError):
        eval_correlator("R", 0.6, [1.6], capped)


def test_decay_rate():
    """rho = |q| prod max(|t|, 1/|t|)"""
    assert decay_rate(0.2, [2.0, 0.5]) == pytest.approx(0.8)


# ==============================================================================
# Values
# ==============================================================================

def test_values_at_zero_q(cfg):
    """At q = 0 only the correction constants survive"""
    assert eval_correlator("R", 0, [2], cfg).value == pytest.approx(1.5)
    assert eval_correlator("S", 0, [4], cfg).value == pytest.approx(2 / 3)


def test_zero_point_functions(cfg):
    """n = 0 gives the partition generating functions"""
    q = 0.2
    assert eval_correlator("R", q, [], cfg).value == pytest.approx(qpochhammer(-q, q), abs=1e-12)
    assert eval_correlator("R-", q, [], cfg).value == pytest.approx(qpochhammer(q, q), abs=1e-12)
    odd = eval_correlator("S", q, [], cfg).value
    assert odd == pytest.approx(qpochhammer(-cmath.sqrt(q), q), abs=1e-12)


def test_methods_agree():
    """Transfer and partition-stream summation give the same value"""
    q, ts = 0.05, [1.4, complex(0.9, 0.28)]
    transfer = eval_correlator("R", q, ts, EvalConfig(weight_cutoff=12, max_cutoff=60))
    stream = eval_correlator("R", q, ts, EvalConfig(weight_cutoff=12, max_cutoff=60, method=STREAM))
    assert transfer.value == pytest.approx(stream.value, abs=1e-10)
    assert stream.method == STREAM


def test_evaluation_records_cutoff(cfg):
    """The cutoff used is at least the configured start"""
    ev = eval_correlator("R", complex(0.2, 0.05), [1.4, complex(0.9, 0.28)], cfg)
    assert ev.cutoff >= cfg.weight_cutoff
    assert ev.tail <= cfg.tail_tol


def test_evaluate_series():
    """An exact series sums at a numeric point"""
    profile = TruncationProfile.build(2, {"t": 2})
    series = constant(1, profile) + monomial((1, 2, 0), profile, 3)
    assert evaluate_series(series, {"q": 0.5, "t": 2}) == pytest.approx(7)


# ==============================================================================
# Theta functions
# ==============================================================================

@pytest.mark.parametrize("q,t", [
    (0.1, 1.0),
    (0.2, complex(1.3, 0.4)),
    (0.35, complex(0.6, -0.9)),
    (complex(0.1, 0.1), complex(1.1, 0.2)),
])
def test_theta_against_mpmath(q, t):
    """theta_{0,1} and theta_{1,1} agree with jtheta(3) and jtheta(2)"""
    z = cmath.log(t) / 2j
    assert theta(0, q, t) == pytest.approx(complex(mpmath.jtheta(3, z, q)), abs=1e-12)
    assert theta(1, q, t) == pytest.approx(complex(mpmath.jtheta(2, z, q)), abs=1e-12)


def test_theta_known_value():
    """theta_{0,1}(0.1, 1) = 1.200200002..."""
    assert theta(0, 0.1, 1) == pytest.approx(1.200200002, abs=1e-10)


def test_theta_at_zero_q():
    """theta_{0,1} = 1 and theta_{1,1} = 0 at q = 0"""
    assert theta(0, 0, 3) == 1
    assert theta(1, 0, 3) == 0


def test_theta_bad_index():
    """Only indices 0 and 1 exist"""
    with pytest.raises(ValueError):
        theta(2, 0.1, 1)


def test_theta_short_cutoff():
    """An explicit cutoff below the tail window is refused"""
    with pytest.raises(TailToleranceError):
        theta(0, 0.9, 1.0, cutoff=1)


def test_b_function_routes_agree_up_to_sign(cfg):
    """Theta and triple-product routes agree in square"""
    q, t = 0.15, complex(1.3, 0.5)
    by_theta = b_function(q, t, cfg)
    by_product = b_function(q, t, cfg, route=PRODUCT_ROUTE)
    assert by_theta ** 2 == pytest.approx(by_product ** 2, abs=1e-10)


def test_b_function_guards(cfg):
    """B needs q != 0 and t inside the annulus"""
    with pytest.raises(AnnulusError):
        b_function(0, 1.5, cfg)
    with pytest.raises(AnnulusError):
        b_function(0.3, 5.0, cfg)
    with pytest.raises(ValueError):
        b_function(0.3, 1.5, cfg, route="other")


# ==============================================================================
# Checks
# ==============================================================================

class TestDifferenceEquationSpec(unittest.TestCase):

    def test_pattern_count(self):
        """3^(n-1) merge patterns"""
        spec = DifferenceEquationSpec("R", 3)
        patterns = list(spec.patterns())
        self.assertEqual(len(patterns), 9)
        self.assertIn(MergePattern((2, 3), (1, -1)), patterns)

    def test_signs(self):
        """(-1)^(1+s+#eps) for R and (-1)^(s+#eps) for R-minus"""
        plain = DifferenceEquationSpec("R", 2)
        alt = DifferenceEquationSpec("R-", 2)
        empty = MergePattern()
        inverse = MergePattern((2,), (-1,))
        self.assertEqual(plain.sign(empty), -1)
        self.assertEqual(alt.sign(empty), 1)
        self.assertEqual(plain.sign(inverse), -1)
        self.assertEqual(alt.sign(inverse), 1)

    def test_arguments(self):
        """Merged slots fold into the first argument"""
        spec = DifferenceEquationSpec("S", 3)
        args = spec.arguments(MergePattern((3,), (-1,)), [2.0, 3.0, 4.0])
        self.assertEqual(args, [0.5, 3.0])
        self.assertEqual(MergePattern((3,), (-1,)).describe(), "t1*t3^-1")

    def test_bad_spec(self):
        """Unknown functions and arity 0 are rejected"""
        with self.assertRaises(EvaluationError):
            DifferenceEquationSpec("T", 2)
        with self.assertRaises(ValueError):
            DifferenceEquationSpec("R", 0)


@pytest.mark.parametrize("func", ["R", "S", "R-", "S-"])
def test_difference_equation_two_point(func, cfg):
    """n = 2 difference equation at the example point"""
    spec = DifferenceEquationSpec(func, 2)
    report = check_difference_equation(spec, complex(0.2, 0.05), [1.4, complex(0.9, 0.28)], cfg)
    assert report.passed, report.summary()


@pytest.mark.parametrize("func", ["R", "R-"])
def test_difference_equation_default_points(func, cfg):
    """n = 3 at the default parameter policy"""
    q = 0.2
    report = check_difference_equation(
        DifferenceEquationSpec(func, 3), q, default_difference_points(q, 3), cfg
    )
    assert report.passed, report.summary()


def test_difference_equation_arity_mismatch(cfg):
    """Argument count must match the declared arity"""
    with pytest.raises(ValueError):
        check_difference_equation(DifferenceEquationSpec("R", 2), 0.2, [1.4], cfg)


@pytest.mark.parametrize("func", ["R", "S", "R-", "S-"])
def test_quasi_periodicity(func, cfg):
    """R(qt) + R(t) = 0 and its alternating and odd analogues"""
    report = check_quasi_periodicity(func, 0.25, 1.6, cfg, tol=1e-9)
    assert report.passed, report.summary()


def test_pole_residue_one_point(cfg):
    """(t - 1) R(t) tends to (-q;q)_inf"""
    report = check_pole_residue("R", 0.2, [], cfg, tol=1e-6)
    assert report.passed, report.summary()
    assert report.params["error_ratio"] == pytest.approx(2, rel=0.1)


def test_pole_residue_two_point(cfg):
    """(t1 - 1) R(t1, t2) tends to R(t2)"""
    report = check_pole_residue("R", 0.2, [1.3], cfg)
    assert report.passed, report.summary()


def test_b_shift(cfg):
    """B(q, qt) B(q, t) is a sign"""
    report = check_b_shift(0.1, 1.5, cfg)
    assert report.passed, report.summary()
    assert report.params["sign"] == 1
    assert report.params["expected"] == 1


def test_b_shift_requires_plus_one_on_positive_reals(monkeypatch, cfg):
    """A product of -1 fails at a positive real point"""
    monkeypatch.setattr(checks_module, "b_function", lambda q, t, cfg: 1j)
    report = check_b_shift(0.2, 1.3, cfg)
    assert not report.passed
    assert report.residual == pytest.approx(2.0)
    assert report.params["sign"] == 1


def test_b_shift_nearest_sign_off_the_real_axis(monkeypatch, cfg):
    """Complex points accept whichever sign is nearest"""
    monkeypatch.setattr(checks_module, "b_function", lambda q, t, cfg: 1j)
    report = check_b_shift(complex(0.2, 0.1), complex(1.1, 0.6), cfg)
    assert report.passed, report.summary()
    assert report.params["sign"] == -1
    assert report.params["expected"] is None


def test_triple_product(cfg):
    """Both routes to B agree in square"""
    report = check_triple_product(complex(0.2, 0.1), complex(1.1, 0.6), cfg)
    assert report.passed, report.summary()


@pytest.mark.parametrize("j", [0, 1])
def test_theta_reflection(j):
    """theta(q, 1/t) = theta(q, t)"""
    assert check_theta_reflection(j, 0.1, complex(1.3, 0.4)).passed


def test_series_consistency(cfg):
    """Exact |t| < 1 series summed numerically agrees with the trace"""
    report = check_series_consistency(
        PartitionKind.STRICT, 0.2, 0.6, onepoint_profile(25, 60), cfg
    )
    assert report.passed, report.summary()
