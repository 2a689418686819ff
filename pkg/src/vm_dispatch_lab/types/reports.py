"""
TypedDict shapes of the JSON benchmark report.

Timing fields are NotRequired: a counts-only report omits them entirely so
that two counts-only runs render byte-identical documents.
"""

from typing import Literal, NotRequired, TypedDict

# ============================================================================
# Per-case rows
# ============================================================================


class CaseRecord(TypedDict):
    """
    One benchmark program on one VM.

    Example:
        {
            "case": "Fibonacci",
            "vm": "stack",
            "dispatch_count": 14012,
            "fetch_count": 17017,
            "oracle_verdict": "match",
            "expected_dispatches": 14012,
            "published_dispatches_count": 14012
        }
    """

    case: str
    vm: Literal["stack", "register"]
    dispatch_count: int
    fetch_count: int
    oracle_verdict: Literal["match", "mismatch"]
    expected_dispatches: int
    published_dispatches_count: int
    repetitions: int
    fetch_time_us: NotRequired[float]
    dispatch_time_us: NotRequired[float]
    exec_time_us: NotRequired[float]


# ============================================================================
# Stack vs register comparisons
# ============================================================================


class ComparisonRecord(TypedDict):
    """Stack-vs-register deltas for one benchmark name (percent of stack)."""

    case: str
    dispatch_count_ratio: float
    exec_time_pct: NotRequired[float | None]
    dispatch_time_pct: NotRequired[float | None]
    fetch_time_pct: NotRequired[float | None]
    davis_estimate_us: NotRequired[float | None]
    register_exec_time_us: NotRequired[float]


class AggregateRecord(TypedDict):
    """Means of the per-name deltas."""

    dispatch_count_ratio: float
    exec_time_pct: NotRequired[float | None]
    dispatch_time_pct: NotRequired[float | None]
    fetch_time_pct: NotRequired[float | None]


class EnvironmentRecord(TypedDict):
    timing_mode: Literal["fine", "counts-only"]
    clock: str
    clock_granularity_us: float
    repetitions: int
    warmup: int


class ReportDocument(TypedDict):
    """Top-level JSON report."""

    cases: list[CaseRecord]
    comparisons: list[ComparisonRecord]
    aggregate: AggregateRecord
    environment: EnvironmentRecord
    notes: list[str]
    published: NotRequired[AggregateRecord]
