"""
verification/__init__.py
Check reports and suite results shared by the exact and numeric layers.
The suite registry lives in verification.registry and is imported explicitly.
"""

from verification.reports import CheckReport, SuiteResult

__all__ = ["CheckReport", "SuiteResult"]
