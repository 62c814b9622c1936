"""
numeric/__init__.py
Complex evaluation of correlators and theta functions, and residual checks.
"""

from numeric.evaluation import (
    AnnulusError,
    EvalConfig,
    Evaluation,
    EvaluationError,
    PoleProximityError,
    TailToleranceError,
    ThetaDegeneracyError,
    eval_correlator,
    evaluate_series,
    format_complex,
    parse_complex,
)
from numeric.theta import b_function, qpochhammer, theta
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
