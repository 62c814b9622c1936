"""
verification/reports.py
Outcome records for identity checks and suites.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

logger = logging.getLogger(__name__)


@dataclass
class CheckReport:
    """
    Outcome of one identity check.

    Exact checks fill `mismatch` (first offending monomial with both values)
    and `compared`; numeric checks fill `residual`, `tolerance` and `cutoff`.
    """
    identity: str
    params: Dict[str, Any] = field(default_factory=dict)
    passed: bool = False
    residual: Optional[float] = None
    tolerance: Optional[float] = None
    cutoff: Optional[int] = None
    mismatch: Optional[Dict[str, Any]] = None
    compared: int = 0
    error: Optional[str] = None

    @classmethod
    def from_residual(cls, identity, residual, tolerance, params=None, cutoff=None):
        """Build a numeric report; pass iff residual <= tolerance."""
        residual = float(residual)
        return cls(
            identity=identity,
            params=dict(params or {}),
            passed=residual <= tolerance,
            residual=residual,
            tolerance=tolerance,
            cutoff=cutoff,
        )

    @classmethod
    def from_error(cls, identity, exc, params=None):
        """A check that raised is a failed check, never an aborted suite."""
        return cls(
            identity=identity,
            params=dict(params or {}),
            passed=False,
            error=f"{type(exc).__name__}: {exc}",
        )

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        parts = [f"[{status}] {self.identity}"]
        if self.residual is not None:
            parts.append(f"residual={self.residual:.3e} tol={self.tolerance:.1e}")
        if self.cutoff is not None:
            parts.append(f"cutoff={self.cutoff}")
        if self.compared:
            parts.append(f"compared={self.compared}")
        if self.mismatch:
            parts.append(
                "first mismatch at {key}: lhs={lhs} rhs={rhs}".format(**self.mismatch)
            )
        if self.error:
            parts.append(f"error={self.error}")
        return "  ".join(parts)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "identity": self.identity,
            "params": self.params,
            "residual": self.residual,
            "pass": self.passed,
            "cutoff": self.cutoff,
            "mismatch": self.mismatch,
            "error": self.error,
        }


@dataclass
class SuiteResult:
    """All reports of one suite run. Overall pass iff every report passes."""
    suite: str
    reports: List[CheckReport] = field(default_factory=list)
    duration_s: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    @property
    def failures(self) -> List[CheckReport]:
        return [r for r in self.reports if not r.passed]

    def to_dict(self) -> Dict[str, Any]:
        # no duration here; stdout output is byte-stable
        return {
            "suite": self.suite,
            "pass": self.passed,
            "reports": [r.to_dict() for r in self.reports],
        }
