"""
verification/registry.py
Static suite registry: each suite is an ordered list of named checks.

A check is a module-level function taking the resolved Settings (plus fixed
keyword arguments) and returning one CheckReport or a list of them, so checks
can be shipped to worker processes.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Union

from config.settings import Settings
from correlators.builders import (
    corrected_onepoint,
    expectation,
    generating_function,
    normal_ordered_npoint,
    npoint_profile,
    onepoint_profile,
)
from correlators.identities import (
    closed_form_onepoint,
    euler_identity,
    lambert_swap,
    lemma_row_sums,
    quasi_periodicity_exact,
    regularized_expectation_identity,
    rminus_closed_form,
    super_closed_form,
    symmetry_checks,
    theta_logderiv_form,
)
from numeric.checks import (
    DifferenceEquationSpec,
    check_b_shift,
    check_difference_equation,
    check_pole_residue,
    check_quasi_periodicity,
    check_series_consistency,
    check_theta_reflection,
    check_triple_product,
    default_difference_points,
)
from numeric.evaluation import eval_correlator, format_complex
from numeric.theta import theta
from partitions.strict import PartitionKind, count_table
from ring.expansions import MINUS
from ring.series import TruncationProfile, constant, eq_on_window
from verification.reports import CheckReport

logger = logging.getLogger(__name__)

STRICT = PartitionKind.STRICT
ODD = PartitionKind.ODD_STRICT

Outcome = Union[CheckReport, List[CheckReport]]

# Fixed sizes of the cheap checks
COUNT_WEIGHT = 60
LEMMA_ROWS = 6
SYMMETRY_Q_ORDER = 8

# Numeric sample points; both t and qt stay inside the annulus
QUASI_POINTS = (
    (complex(0.25), complex(1.6)),
    (complex(0.2, 0.05), complex(1.4)),
    (complex(0.1), complex(2.5)),
)
POLE_POINTS = (
    (complex(0.2), ()),
    (complex(0.2), (complex(1.3),)),
)
CONSISTENCY_POINT = (complex(0.2), complex(0.6))
THETA_GRID_Q = (complex(0.05), complex(0.1), complex(0.15), complex(0.2, 0.1), complex(0.3))
THETA_GRID_T = (complex(1.2), complex(1.5), complex(1.1, 0.6), complex(2.0), complex(0.5, 1.5))


@dataclass(frozen=True)
class Check:
    """One registered check: a name, a module-level function and fixed arguments."""
    name: str
    fn: Callable[..., Outcome]
    kwargs: Dict[str, Any] = field(default_factory=dict)

    def run(self, settings: Settings) -> List[CheckReport]:
        outcome = self.fn(settings, **self.kwargs)
        return outcome if isinstance(outcome, list) else [outcome]


# ── Exact checks ──────────────────────────────────────────────

def _profile(settings: Settings, z: bool = False) -> TruncationProfile:
    return onepoint_profile(settings.q_order, settings.t_band,
                            z_max=settings.z_order if z else 0)


def _pair(name, pair, params=None) -> CheckReport:
    lhs, rhs = pair
    return eq_on_window(lhs, rhs, lhs.profile, identity=name, params=params)


def partition_counts(settings: Settings, kind: PartitionKind) -> CheckReport:
    weight = max(COUNT_WEIGHT, settings.q_order)
    profile = TruncationProfile.build(weight)
    gf = generating_function(kind, profile)
    expected = [int(gf.coeff((n, 0))) for n in range(weight + 1)]
    got = count_table(kind, weight)
    mismatch = next((n for n in range(weight + 1) if got[n] != expected[n]), None)
    report = CheckReport(
        identity=f"partition_counts[{kind.value}]",
        params={"max_weight": weight},
        passed=mismatch is None,
        compared=weight + 1,
    )
    if mismatch is not None:
        report.mismatch = {"key": {"q": mismatch}, "lhs": str(got[mismatch]),
                           "rhs": str(expected[mismatch])}
    return report


def normalization(settings: Settings, kind: PartitionKind) -> CheckReport:
    profile = _profile(settings)
    one = expectation(kind, lambda lam: constant(1, profile), profile.q_max, profile)
    return eq_on_window(one, constant(1, profile), identity=f"expectation_of_one[{kind.value}]")


def euler(settings: Settings) -> CheckReport:
    profile = TruncationProfile.build(settings.q_order, {}, settings.z_order)
    return _pair("euler_identity", euler_identity(profile))


def row_sums(settings: Settings, kind: PartitionKind) -> List[CheckReport]:
    profile = _profile(settings)
    return [
        _pair(f"lemma_row_sums[{kind.value},k={k}]", lemma_row_sums(kind, k, profile), {"k": k})
        for k in range(LEMMA_ROWS + 1)
    ]


def regularized(settings: Settings, kind: PartitionKind, z_weighted: bool) -> CheckReport:
    profile = _profile(settings, z=z_weighted)
    suffix = ",z" if z_weighted else ""
    return _pair(
        f"regularized_expectation[{kind.value}{suffix}]",
        regularized_expectation_identity(kind, z_weighted, profile),
    )


def closed_form(settings: Settings, kind: PartitionKind, form: str) -> CheckReport:
    profile = _profile(settings)
    normal = normal_ordered_npoint(kind, ("t",), profile)
    closed = closed_form_onepoint(kind, profile, form=form)
    return eq_on_window(normal, closed, identity=f"closed_form[{kind.value},{form}]")


def lambert(settings: Settings, kind: PartitionKind) -> CheckReport:
    return _pair(f"lambert_swap[{kind.value}]", lambert_swap(kind, _profile(settings)))


def theta_form(settings: Settings, kind: PartitionKind) -> CheckReport:
    profile = _profile(settings)
    corrected = corrected_onepoint(kind, MINUS, profile)
    return eq_on_window(corrected, theta_logderiv_form(kind, profile),
                        identity=f"theta_logderiv[{kind.value}]")


def symmetries(settings: Settings, kind: PartitionKind) -> List[CheckReport]:
    order = min(settings.q_order, SYMMETRY_Q_ORDER)
    profile = npoint_profile(2, order)
    return symmetry_checks(kind, ("t1", "t2"), profile)


def super_form(settings: Settings, kind: PartitionKind) -> CheckReport:
    return _pair(f"super_closed_form[{kind.value}]",
                 super_closed_form(kind, _profile(settings, z=True)))


def rminus(settings: Settings) -> CheckReport:
    return _pair("rminus_closed_form", rminus_closed_form(_profile(settings)))


def shift_exact(settings: Settings, kind: PartitionKind, alternating: bool) -> CheckReport:
    profile = onepoint_profile(settings.shift_q_order, settings.shift_t_band)
    return quasi_periodicity_exact(kind, profile, alternating=alternating)


# ── Numeric checks ────────────────────────────────────────────

def known_values(settings: Settings) -> List[CheckReport]:
    """Values at q = 0 and a hand-summed theta value."""
    cfg = settings.eval_config()
    theta_expected = 1 + 2 * 0.1 + 2 * 0.1 ** 4 + 2 * 0.1 ** 9 + 2 * 0.1 ** 16
    cases = [
        ("value[R,q=0,t=2]", eval_correlator("R", 0, [2], cfg).value, 1.5),
        ("value[S,q=0,t=4]", eval_correlator("S", 0, [4], cfg).value, 2 / 3),
        ("value[theta0,q=0.1,t=1]", theta(0, 0.1, 1), theta_expected),
    ]
    return [
        CheckReport.from_residual(name, abs(got - want), 1e-12,
                                  params={"value": format_complex(got)})
        for name, got, want in cases
    ]


def quasi_numeric(settings: Settings, func: str) -> List[CheckReport]:
    cfg = settings.eval_config()
    return [check_quasi_periodicity(func, q, t, cfg, tol=1e-9) for q, t in QUASI_POINTS]


def pole(settings: Settings, func: str) -> List[CheckReport]:
    cfg = settings.eval_config()
    # the one-point limit is the plain generating function, so it is held tighter
    return [
        check_pole_residue(func, q, rest, cfg, tol=1e-4 if rest else 1e-6)
        for q, rest in POLE_POINTS
    ]


def consistency(settings: Settings, kind: PartitionKind) -> CheckReport:
    q, t = CONSISTENCY_POINT
    # the odd strict series is graded by q-hat, so it needs twice the order
    order = 25 if kind is STRICT else 50
    band = 60 if kind is STRICT else 80
    profile = onepoint_profile(order, band)
    return check_series_consistency(kind, q, t, profile, settings.eval_config())


def difference(settings: Settings, func: str) -> List[CheckReport]:
    cfg = settings.eval_config()
    reports = [
        check_difference_equation(DifferenceEquationSpec(func, len(settings.ts)),
                                  settings.q, list(settings.ts), cfg)
    ]
    for arity in (2, 3):
        points = default_difference_points(settings.q, arity)
        reports.append(check_difference_equation(DifferenceEquationSpec(func, arity),
                                                 settings.q, points, cfg))
    return reports


def b_shift_grid(settings: Settings) -> List[CheckReport]:
    cfg = settings.eval_config()
    return [check_b_shift(q, t, cfg) for q in THETA_GRID_Q for t in THETA_GRID_T]


def triple_product_grid(settings: Settings) -> List[CheckReport]:
    cfg = settings.eval_config()
    return [check_triple_product(q, t, cfg) for q in THETA_GRID_Q for t in THETA_GRID_T]


def reflection(settings: Settings) -> List[CheckReport]:
    return [
        check_theta_reflection(j, q, t)
        for j in (0, 1)
        for q, t in ((0.1, complex(1.3, 0.4)), (complex(0.2, 0.1), complex(0.7, 0.5)))
    ]


# ── Registry ──────────────────────────────────────────────────

def _exact_suite(kind: PartitionKind) -> List[Check]:
    k = {"kind": kind}
    return [
        Check(f"partition_counts[{kind.value}]", partition_counts, k),
        Check(f"expectation_of_one[{kind.value}]", normalization, k),
        Check(f"lemma_row_sums[{kind.value}]", row_sums, k),
        Check(f"regularized_expectation[{kind.value}]", regularized, dict(k, z_weighted=False)),
        Check(f"closed_form[{kind.value},divisor]", closed_form, dict(k, form="divisor")),
        Check(f"closed_form[{kind.value},lambert]", closed_form, dict(k, form="lambert")),
        Check(f"lambert_swap[{kind.value}]", lambert, k),
        Check(f"theta_logderiv[{kind.value}]", theta_form, k),
        Check(f"symmetry[{kind.value}]", symmetries, k),
    ]


SUITES: Dict[str, List[Check]] = {
    "sp-exact": [Check("euler_identity", euler)] + _exact_suite(STRICT),
    "osp-exact": _exact_suite(ODD),
    "super-exact": [
        Check("regularized_expectation[strict,z]", regularized, {"kind": STRICT, "z_weighted": True}),
        Check("regularized_expectation[odd-strict,z]", regularized, {"kind": ODD, "z_weighted": True}),
        Check("super_closed_form[strict]", super_form, {"kind": STRICT}),
        Check("super_closed_form[odd-strict]", super_form, {"kind": ODD}),
        Check("rminus_closed_form", rminus),
    ],
    "shift-exact": [
        Check("quasi_periodicity_exact[strict]", shift_exact, {"kind": STRICT, "alternating": False}),
        Check("quasi_periodicity_exact[odd-strict]", shift_exact, {"kind": ODD, "alternating": False}),
        Check("quasi_periodicity_exact[strict,alternating]", shift_exact,
              {"kind": STRICT, "alternating": True}),
        Check("quasi_periodicity_exact[odd-strict,alternating]", shift_exact,
              {"kind": ODD, "alternating": True}),
    ],
    "numeric-1pt": [
        Check("known_values", known_values),
        Check("quasi_periodicity[R]", quasi_numeric, {"func": "R"}),
        Check("quasi_periodicity[S]", quasi_numeric, {"func": "S"}),
        Check("quasi_periodicity[R-]", quasi_numeric, {"func": "R-"}),
        Check("quasi_periodicity[S-]", quasi_numeric, {"func": "S-"}),
        Check("pole_residue[R]", pole, {"func": "R"}),
        Check("pole_residue[R-]", pole, {"func": "R-"}),
        Check("pole_residue[S]", pole, {"func": "S"}),
        Check("series_consistency[strict]", consistency, {"kind": STRICT}),
        Check("series_consistency[odd-strict]", consistency, {"kind": ODD}),
    ],
    "numeric-diff": [
        Check(f"difference_equation[{func}]", difference, {"func": func})
        for func in ("R", "S", "R-", "S-")
    ],
    "numeric-theta": [
        Check("b_shift", b_shift_grid),
        Check("triple_product", triple_product_grid),
        Check("theta_reflection", reflection),
    ],
}

SUITES["all"] = [check for name in list(SUITES) for check in SUITES[name]]

SUITE_NAMES = tuple(SUITES)


def get_suite(name: str) -> List[Check]:
    """Raises KeyError for unknown suite names."""
    try:
        return SUITES[name]
    except KeyError:
        raise KeyError(f"unknown suite {name!r}; known: {', '.join(SUITE_NAMES)}")
