"""
Type definitions for vm-dispatch-lab.

Provides the RunResult shared by both interpreters and TypedDict shapes of
the JSON benchmark report.
"""

from .reports import (
    AggregateRecord,
    CaseRecord,
    ComparisonRecord,
    EnvironmentRecord,
    ReportDocument,
)
from .results import RunResult

__all__ = [
    "AggregateRecord",
    "CaseRecord",
    "ComparisonRecord",
    "EnvironmentRecord",
    "ReportDocument",
    "RunResult",
]
