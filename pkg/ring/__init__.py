"""
ring/__init__.py
Exact truncated Laurent series: the arithmetic substrate of every exact check.
"""

from ring.series import (
    ExponentKey,
    InadmissibleExpansionError,
    MaskConstraint,
    MaskedKeyError,
    MaskedOperandError,
    NonInvertibleError,
    ProfileMismatchError,
    Series,
    SeriesError,
    TruncationProfile,
    add,
    coeff,
    constant,
    eq_on_window,
    inverse_geometric,
    log_derivative,
    monomial,
    mul,
    product,
    reciprocal,
    scale,
    t_derivative,
    zero,
)
from ring.expansions import (
    MINUS,
    PLUS,
    correction,
    correction_minus,
    correction_ns_minus,
    correction_ns_plus,
    correction_plus,
    finite_pochhammer,
    pochhammer_inf,
    pochhammer_log_derivative,
    subst_qshift,
)
