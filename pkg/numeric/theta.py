"""
numeric/theta.py
Jacobi theta sums, numeric q-Pochhammer products and the theta ratio B(q, t).
"""

import cmath
import logging
import math
from typing import Optional

import numpy as np

from numeric.evaluation import (
    AnnulusError,
    EvalConfig,
    TailToleranceError,
    ThetaDegeneracyError,
    check_annulus,
)

logger = logging.getLogger(__name__)

THETA_ROUTE = "theta"
PRODUCT_ROUTE = "product"
ROUTES = (THETA_ROUTE, PRODUCT_ROUTE)

# Hard cap on the theta window half-width
MAX_THETA_TERMS = 10_000

# Divisors below this modulus are treated as zero
DEGENERACY_FLOOR = 1e-280


def _theta_window(q: complex, t: complex, tail_tol: float) -> int:
    """Smallest K with |q|^(K(K-1)) * r^(K+1) below tail_tol, r = max(|t|, 1/|t|)."""
    log_q = math.log(abs(q))
    log_r = abs(math.log(abs(t)))
    target = math.log(tail_tol)
    for k in range(1, MAX_THETA_TERMS):
        if k * (k - 1) * log_q + (k + 1) * log_r < target:
            return k
    raise TailToleranceError(f"theta sum at |q| = {abs(q):.6g} needs over {MAX_THETA_TERMS} terms")


def theta(j: int, q: complex, t: complex, cutoff: Optional[int] = None,
          tail_tol: float = 1e-16) -> complex:
    """
    theta_{j,1}(q, t) = sum over n in j/2 + Z of q^(n^2) t^n.

    theta_{1,1} is computed as q^(1/4) t^(1/2) sum_m q^(m(m+1)) t^m with
    principal roots. `cutoff` fixes the half-width of the summation window;
    by default it is chosen from tail_tol.
    """
    if j not in (0, 1):
        raise ValueError(f"theta index must be 0 or 1, got {j}")
    q, t = complex(q), complex(t)
    if abs(q) >= 1:
        raise AnnulusError(f"|q| = {abs(q):.6g} must be below 1")
    if t == 0:
        raise AnnulusError("theta is not defined at t = 0")
    if q == 0:
        return 1 + 0j if j == 0 else 0j

    window = _theta_window(q, t, tail_tol)
    if cutoff is None:
        cutoff = window
    elif cutoff < window:
        raise TailToleranceError(
            f"theta cutoff {cutoff} leaves a tail above {tail_tol:.1e} (needs {window})"
        )

    if j == 0:
        n = np.arange(-cutoff, cutoff + 1)
        return complex(np.sum(np.power(q, n * n) * np.power(t, n)))
    m = np.arange(-cutoff - 1, cutoff + 1)
    total = np.sum(np.power(q, m * (m + 1)) * np.power(t, m))
    return complex(cmath.sqrt(cmath.sqrt(q)) * cmath.sqrt(t) * total)


def qpochhammer(a: complex, q: complex, tail_tol: float = 1e-17) -> complex:
    """(a; q)_inf = prod_{k>=0} (1 - a q^k), stopped once |a q^k| < tail_tol."""
    a, q = complex(a), complex(q)
    if abs(q) >= 1:
        raise AnnulusError(f"(a;q)_inf needs |q| < 1, got {abs(q):.6g}")
    if a == 0:
        return 1 + 0j
    if q == 0:
        return 1 - a
    count = max(1, math.ceil(math.log(tail_tol / abs(a)) / math.log(abs(q))) + 1)
    return complex(np.prod(1 - a * np.power(q, np.arange(count))))


def b_function(q: complex, t: complex, cfg: Optional[EvalConfig] = None,
               route: str = THETA_ROUTE) -> complex:
    """
    B(q, t) = theta_{1,1}(q, -t) / theta_{0,1}(q, -t), or by the triple product
    (-q^(-1/2) t)^(-1/2) (t;q^2)(q^2/t;q^2) / ((qt;q^2)(q/t;q^2)), principal branch.

    Raises:
        AnnulusError: t outside the guarded annulus.
        ThetaDegeneracyError: a divisor vanishes numerically.
    """
    cfg = cfg or EvalConfig()
    q, t = complex(q), complex(t)
    if route not in ROUTES:
        raise ValueError(f"unknown route {route!r}; use one of {ROUTES}")
    check_annulus(q, t, cfg.annulus_guard)
    if q == 0:
        raise AnnulusError("B(q, t) needs q != 0")

    if route == THETA_ROUTE:
        den = theta(0, q, -t)
        if abs(den) < DEGENERACY_FLOOR:
            raise ThetaDegeneracyError(f"theta_(0,1)(q, -t) vanishes at t = {t}")
        return theta(1, q, -t) / den

    q2 = q * q
    den = qpochhammer(q * t, q2) * qpochhammer(q / t, q2)
    if abs(den) < DEGENERACY_FLOOR:
        raise ThetaDegeneracyError(f"triple-product denominator vanishes at t = {t}")
    prefactor = 1 / cmath.sqrt(-t / cmath.sqrt(q))
    return prefactor * qpochhammer(t, q2) * qpochhammer(q2 / t, q2) / den
