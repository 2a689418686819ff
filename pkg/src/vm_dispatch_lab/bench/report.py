"""
Stack-vs-register comparison report.

Every delta is expressed as a percentage of the stack machine's value,
``(stack - register) / stack * 100``: positive means the register machine
spent less. Aggregates are plain means of the per-benchmark percentages.
"""

import logging
import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from ..errors import IncompleteResults
from ..instrumentation import Metrics, davis_estimate, davis_input_from_metrics
from ..types import AggregateRecord, CaseRecord, ComparisonRecord, ReportDocument
from .corpus import CASE_NAMES, VM_KINDS
from .oracle import expected_dispatches
from .reference import (
    PUBLISHED,
    PUBLISHED_DISPATCH_TIME_PCT,
    PUBLISHED_EXEC_TIME_PCT,
    PUBLISHED_FETCH_TIME_PCT,
    published_dispatches,
)

logger = logging.getLogger(__name__)


def percent_delta(stack: float, register: float) -> float | None:
    """(stack - register) / stack * 100, or None when stack is zero."""
    if stack == 0:
        return None
    return (stack - register) / stack * 100.0


def _mean(values: Iterable[float | None]) -> float | None:
    collected = list(values)
    if not collected or any(value is None for value in collected):
        return None
    return math.fsum(collected) / len(collected)  # type: ignore[arg-type]


@dataclass(frozen=True, slots=True)
class OracleVerdict:
    expected: int
    actual: int

    @property
    def matches(self) -> bool:
        return self.expected == self.actual

    @property
    def label(self) -> str:
        return "match" if self.matches else "mismatch"


@dataclass(frozen=True, slots=True)
class NameComparison:
    """Deltas of one benchmark name; time deltas are None in counts-only mode."""

    name: str
    dispatch_count_ratio: float
    exec_time_pct: float | None = None
    dispatch_time_pct: float | None = None
    fetch_time_pct: float | None = None
    davis_estimate_us: float | None = None
    register_exec_time_us: float | None = None


@dataclass(frozen=True, slots=True)
class AggregateDeltas:
    dispatch_count_ratio: float
    exec_time_pct: float | None = None
    dispatch_time_pct: float | None = None
    fetch_time_pct: float | None = None

    def to_record(self, timed: bool) -> AggregateRecord:
        record = AggregateRecord(dispatch_count_ratio=self.dispatch_count_ratio)
        if timed:
            record["exec_time_pct"] = self.exec_time_pct
            record["dispatch_time_pct"] = self.dispatch_time_pct
            record["fetch_time_pct"] = self.fetch_time_pct
        return record


@dataclass(frozen=True)
class BenchReport:
    """
    Everything a benchmark session produced, ready for rendering.

    Attributes:
        names: Benchmark names covered, in corpus order
        results: Mean metrics per (name, vm)
        verdicts: Oracle comparison per (name, vm)
        comparisons: Per-name deltas
        aggregate: Means of the per-name deltas
        published: The same arithmetic applied to the published figures
        fine_timing: False for counts-only reports (times omitted)
    """

    names: tuple[str, ...]
    results: dict[tuple[str, str], Metrics]
    verdicts: dict[tuple[str, str], OracleVerdict]
    comparisons: tuple[NameComparison, ...]
    aggregate: AggregateDeltas
    published: AggregateDeltas
    fine_timing: bool = True
    clock: str = "process_time"
    clock_granularity_us: float = 0.0
    repetitions: int = 1
    warmup: int = 0
    notes: tuple[str, ...] = field(default=())

    @property
    def all_match(self) -> bool:
        return all(verdict.matches for verdict in self.verdicts.values())

    def case_records(self) -> list[CaseRecord]:
        records = []
        for name in self.names:
            for vm in VM_KINDS:
                metrics = self.results[(name, vm)]
                verdict = self.verdicts[(name, vm)]
                record = CaseRecord(
                    case=name,
                    vm=vm,
                    dispatch_count=metrics.dispatch_count,
                    fetch_count=metrics.fetch_count,
                    oracle_verdict=verdict.label,  # type: ignore[typeddict-item]
                    expected_dispatches=verdict.expected,
                    published_dispatches_count=published_dispatches(name, vm),
                    repetitions=metrics.repetitions,
                )
                if self.fine_timing:
                    record["fetch_time_us"] = metrics.fetch_time_us
                    record["dispatch_time_us"] = metrics.dispatch_time_us
                    record["exec_time_us"] = metrics.exec_time_us
                records.append(record)
        return records

    def comparison_records(self) -> list[ComparisonRecord]:
        records = []
        for comparison in self.comparisons:
            record = ComparisonRecord(
                case=comparison.name,
                dispatch_count_ratio=comparison.dispatch_count_ratio,
            )
            if self.fine_timing:
                record["exec_time_pct"] = comparison.exec_time_pct
                record["dispatch_time_pct"] = comparison.dispatch_time_pct
                record["fetch_time_pct"] = comparison.fetch_time_pct
                record["davis_estimate_us"] = comparison.davis_estimate_us
                if comparison.register_exec_time_us is not None:
                    record["register_exec_time_us"] = comparison.register_exec_time_us
            records.append(record)
        return records

    def to_document(self) -> ReportDocument:
        """Plain-data form used by the JSON renderer."""
        return ReportDocument(
            cases=self.case_records(),
            comparisons=self.comparison_records(),
            aggregate=self.aggregate.to_record(self.fine_timing),
            environment={
                "timing_mode": "fine" if self.fine_timing else "counts-only",
                "clock": self.clock,
                "clock_granularity_us": self.clock_granularity_us,
                "repetitions": self.repetitions,
                "warmup": self.warmup,
            },
            notes=list(self.notes),
            published=self.published.to_record(timed=True),
        )


def _compare_name(name: str, stack: Metrics, register: Metrics, timed: bool) -> NameComparison:
    ratio = register.dispatch_count / stack.dispatch_count if stack.dispatch_count else math.inf
    if not timed:
        return NameComparison(name=name, dispatch_count_ratio=ratio)

    davis_input = davis_input_from_metrics(stack, register)
    return NameComparison(
        name=name,
        dispatch_count_ratio=ratio,
        exec_time_pct=percent_delta(stack.exec_time_us, register.exec_time_us),
        dispatch_time_pct=percent_delta(stack.dispatch_time_us, register.dispatch_time_us),
        fetch_time_pct=percent_delta(stack.fetch_time_us, register.fetch_time_us),
        davis_estimate_us=davis_estimate(davis_input) if davis_input is not None else None,
        register_exec_time_us=register.exec_time_us,
    )


def _aggregate(comparisons: Iterable[NameComparison]) -> AggregateDeltas:
    items = list(comparisons)
    return AggregateDeltas(
        dispatch_count_ratio=_mean(c.dispatch_count_ratio for c in items) or 0.0,
        exec_time_pct=_mean(c.exec_time_pct for c in items),
        dispatch_time_pct=_mean(c.dispatch_time_pct for c in items),
        fetch_time_pct=_mean(c.fetch_time_pct for c in items),
    )


def published_aggregate(names: Iterable[str] = CASE_NAMES) -> AggregateDeltas:
    """Deltas recomputed from the published figures of the given benchmarks."""
    comparisons = []
    for name in names:
        stack, register = PUBLISHED[(name, "stack")], PUBLISHED[(name, "register")]
        comparisons.append(
            NameComparison(
                name=name,
                dispatch_count_ratio=register.dispatch_count / stack.dispatch_count,
                exec_time_pct=percent_delta(stack.exec_time_us, register.exec_time_us),
                dispatch_time_pct=percent_delta(stack.dispatch_time_us, register.dispatch_time_us),
                fetch_time_pct=percent_delta(stack.fetch_time_us, register.fetch_time_us),
            )
        )
    return _aggregate(comparisons)


def _fmt_pct(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.2f}%"


def _notes(
    names: tuple[str, ...],
    verdicts: Mapping[tuple[str, str], OracleVerdict],
    published: AggregateDeltas,
    fine_timing: bool,
    clock_granularity_us: float,
) -> tuple[str, ...]:
    notes = []
    for (name, vm), verdict in verdicts.items():
        if not verdict.matches:
            notes.append(
                f"Oracle mismatch for {name}/{vm}: expected {verdict.expected}, "
                f"measured {verdict.actual}."
            )

    if "AddictiveAddition" in names:
        expected = expected_dispatches(("AddictiveAddition", "stack"))
        published = published_dispatches("AddictiveAddition", "stack")
        notes.append(
            f"AddictiveAddition/stack: the printed listing executes {expected} dispatches; "
            f"the published {published} cannot be reproduced from it "
            f"(delta {published - expected})."
        )
    if "ExhaustiveCollatz" in names:
        deltas = []
        for vm in VM_KINDS:
            expected = expected_dispatches(("ExhaustiveCollatz", vm))
            published = published_dispatches("ExhaustiveCollatz", vm)
            deltas.append(f"{vm} {expected} vs published {published} (delta {published - expected})")
        notes.append("ExhaustiveCollatz: " + "; ".join(deltas) + ".")

    notes.append(
        f"Published headline deltas: execution {PUBLISHED_EXEC_TIME_PCT}%, "
        f"dispatch {PUBLISHED_DISPATCH_TIME_PCT}%, fetch {PUBLISHED_FETCH_TIME_PCT}%; "
        f"recomputed from the published figures: execution {_fmt_pct(published.exec_time_pct)}, "
        f"dispatch {_fmt_pct(published.dispatch_time_pct)}, "
        f"fetch {_fmt_pct(published.fetch_time_pct)}."
    )

    if fine_timing:
        notes.append(
            f"Times are process CPU time in microseconds (clock granularity "
            f"{clock_granularity_us:g} us); published times come from different hardware "
            f"and are not comparable in absolute terms."
        )
    else:
        notes.append("Counts-only mode: per-instruction clocks disabled, times omitted.")
    return tuple(notes)


def compare_report(
    results: Mapping[tuple[str, str], Metrics],
    names: Iterable[str] = CASE_NAMES,
    *,
    fine_timing: bool = True,
    clock: str = "process_time",
    clock_granularity_us: float = 0.0,
    repetitions: int = 1,
    warmup: int = 0,
) -> BenchReport:
    """
    Build the comparison report for the requested benchmark names.

    Args:
        results: Mean metrics keyed by (name, vm)
        names: Benchmark names to compare; both machines must be present for each
        fine_timing: Whether the results carry phase times
        clock: Name of the clock used for the measurements
        clock_granularity_us: Clock granularity for the environment note
        repetitions: Measured runs per case
        warmup: Discarded runs per case

    Returns:
        BenchReport with verdicts, deltas, aggregates and notes

    Raises:
        IncompleteResults: A requested (name, vm) pair has no result
    """
    selected = tuple(name for name in CASE_NAMES if name in set(names))
    missing = [
        f"{name}/{vm}" for name in selected for vm in VM_KINDS if (name, vm) not in results
    ]
    if missing or not selected:
        raise IncompleteResults(f"Missing results for: {', '.join(missing) or 'every case'}")

    ordered = {(name, vm): results[(name, vm)] for name in selected for vm in VM_KINDS}
    verdicts = {
        key: OracleVerdict(expected=expected_dispatches(key), actual=metrics.dispatch_count)
        for key, metrics in ordered.items()
    }
    for (name, vm), verdict in verdicts.items():
        if verdict.matches:
            logger.info(f"{name}/{vm}: oracle match ({verdict.actual} dispatches)")
        else:
            logger.warning(
                f"{name}/{vm}: oracle mismatch, expected {verdict.expected}, "
                f"measured {verdict.actual}"
            )

    comparisons = tuple(
        _compare_name(name, ordered[(name, "stack")], ordered[(name, "register")], fine_timing)
        for name in selected
    )
    published = published_aggregate(selected)

    return BenchReport(
        names=selected,
        results=ordered,
        verdicts=verdicts,
        comparisons=comparisons,
        aggregate=_aggregate(comparisons),
        published=published,
        fine_timing=fine_timing,
        clock=clock,
        clock_granularity_us=clock_granularity_us,
        repetitions=repetitions,
        warmup=warmup,
        notes=_notes(selected, verdicts, published, fine_timing, clock_granularity_us),
    )
