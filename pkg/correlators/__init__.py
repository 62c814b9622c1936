"""
correlators/__init__.py
Exact correlator series, their closed forms and the identities between them.
"""

from correlators.builders import (
    CorrelatorSpec,
    CutoffError,
    alternating_onepoint,
    build,
    corrected_onepoint,
    expectation,
    generating_function,
    normal_ordered_npoint,
    npoint_profile,
    onepoint_profile,
    partition_sum,
    slot_variables,
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
from correlators.targets import TARGETS, SeriesTarget, get_target
