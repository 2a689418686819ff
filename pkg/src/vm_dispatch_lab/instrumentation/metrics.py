"""
Execution metrics: dispatch/fetch counters and phase timers.

A Metrics value describes one run (or the mean of several). Counts are exact
in every timing mode; phase times are zero when fine timing is disabled.
Execution time is measured around the whole run and never derived from the
phase sums.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, replace
from enum import StrEnum

from ..errors import CountInstabilityError

logger = logging.getLogger(__name__)


class Phase(StrEnum):
    """Instruction-cycle phase with its own timer and counter."""

    FETCH = "fetch"
    DISPATCH = "dispatch"


@dataclass(frozen=True, slots=True)
class Metrics:
    """Counters and phase times (microseconds) for one run or an aggregate."""

    dispatch_count: int = 0
    fetch_count: int = 0
    fetch_time_us: float = 0.0
    dispatch_time_us: float = 0.0
    exec_time_us: float = 0.0
    repetitions: int = 1

    @property
    def counts(self) -> tuple[int, int]:
        """(dispatch_count, fetch_count)."""
        return self.dispatch_count, self.fetch_count

    @property
    def operand_fetches(self) -> int:
        """Fetches beyond the one instruction fetch per dispatch."""
        return self.fetch_count - self.dispatch_count

    @property
    def mean_dispatch_time_us(self) -> float | None:
        """Average cost of one dispatch, None when nothing was dispatched."""
        if self.dispatch_count == 0:
            return None
        return self.dispatch_time_us / self.dispatch_count

    @property
    def mean_fetch_time_us(self) -> float | None:
        """Average cost of one fetch, None when nothing was fetched."""
        if self.fetch_count == 0:
            return None
        return self.fetch_time_us / self.fetch_count

    def with_exec_time(self, exec_time_us: float) -> "Metrics":
        return replace(self, exec_time_us=exec_time_us)


def record_phase(metrics: Metrics, phase: Phase, duration_us: float, count_increment: int) -> Metrics:
    """
    Add a phase duration and count to a Metrics value.

    Args:
        metrics: Metrics to extend
        phase: Which accumulator to add to
        duration_us: Time spent in the phase, in microseconds
        count_increment: Number of fetches or dispatches covered by the duration

    Returns:
        New Metrics with the phase accumulator and counter increased

    Raises:
        ValueError: If the duration is not finite
    """
    if not math.isfinite(duration_us):
        raise ValueError(f"Phase duration must be finite, got {duration_us}")

    if phase is Phase.FETCH:
        return replace(
            metrics,
            fetch_time_us=metrics.fetch_time_us + duration_us,
            fetch_count=metrics.fetch_count + count_increment,
        )
    return replace(
        metrics,
        dispatch_time_us=metrics.dispatch_time_us + duration_us,
        dispatch_count=metrics.dispatch_count + count_increment,
    )


def aggregate_runs(runs: Sequence[Metrics]) -> Metrics:
    """
    Average repeated runs of the same program.

    Counts must be identical across runs; times are arithmetic means.

    Raises:
        ValueError: If no runs are given
        CountInstabilityError: If two runs disagree on their counts
    """
    if not runs:
        raise ValueError("Cannot aggregate zero runs")

    reference = runs[0].counts
    for index, run in enumerate(runs[1:], start=1):
        if run.counts != reference:
            logger.error(f"Run {index} counts {run.counts} differ from run 0 counts {reference}")
            raise CountInstabilityError(
                f"Run {index} produced counts {run.counts}, run 0 produced {reference}"
            )

    n = len(runs)
    return Metrics(
        dispatch_count=reference[0],
        fetch_count=reference[1],
        fetch_time_us=math.fsum(r.fetch_time_us for r in runs) / n,
        dispatch_time_us=math.fsum(r.dispatch_time_us for r in runs) / n,
        exec_time_us=math.fsum(r.exec_time_us for r in runs) / n,
        repetitions=n,
    )
