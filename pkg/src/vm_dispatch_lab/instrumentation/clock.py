"""
Per-process CPU clock and overhead-corrected measurement.

All timing in vm-dispatch-lab is process CPU time, never wall-clock time.
A clock reading is an integer tick count; ``to_micros`` converts ticks to
microseconds with the clock's resolution, and ``corrected_measure`` removes
one clock-read overhead from a measured interval:

    t0 = read(); t1 = read(); action(); t2 = read()
    elapsed = (t2 - t1) - (t1 - t0)
"""

import logging
import time
from collections.abc import Callable
from dataclasses import dataclass
from typing import TypeVar

from ..errors import ClockUnavailable

logger = logging.getLogger(__name__)

T = TypeVar("T")

NANOS_PER_SECOND = 1_000_000_000


def to_micros(ticks: int | float, resolution: int | float) -> float:
    """
    Convert clock ticks to microseconds.

    Args:
        ticks: Tick count (or tick difference)
        resolution: Ticks per second, must be positive

    Returns:
        ticks * 1_000_000 / resolution as a float

    Raises:
        ValueError: If resolution is not positive
    """
    if resolution <= 0:
        raise ValueError(f"Clock resolution must be positive, got {resolution}")
    return ticks * 1_000_000 / resolution


@dataclass(frozen=True, slots=True)
class CpuClock:
    """
    A per-process CPU tick counter.

    Attributes:
        read: Callable returning the current tick count (non-decreasing)
        resolution_ticks_per_second: Ticks per second of ``read``
        granularity_us: Smallest observable step of the underlying clock
    """

    read: Callable[[], int]
    resolution_ticks_per_second: int = NANOS_PER_SECOND
    granularity_us: float = 0.0

    @classmethod
    def process(cls) -> "CpuClock":
        """
        Build the clock over ``time.process_time_ns``.

        Raises:
            ClockUnavailable: If the platform cannot report process CPU time
        """
        try:
            time.process_time_ns()
            info = time.get_clock_info("process_time")
        except (OSError, ValueError) as e:
            raise ClockUnavailable(f"Process CPU clock unavailable: {e}") from e
        return cls(
            read=time.process_time_ns,
            resolution_ticks_per_second=NANOS_PER_SECOND,
            granularity_us=info.resolution * 1_000_000,
        )

    def micros(self, ticks: int | float) -> float:
        """Convert ticks of this clock to microseconds."""
        return to_micros(ticks, self.resolution_ticks_per_second)


_default_clock: CpuClock | None = None


def default_clock() -> CpuClock:
    """Return the shared process CPU clock (created on first use)."""
    global _default_clock

    if _default_clock is None:
        _default_clock = CpuClock.process()
        logger.debug(
            f"Process CPU clock ready (granularity {_default_clock.granularity_us:.3f} us)"
        )
    return _default_clock


def corrected_call(action: Callable[[], T], clock: CpuClock | None = None) -> tuple[T, float]:
    """
    Run ``action`` and measure it with one clock-read overhead subtracted.

    Args:
        action: Zero-argument callable to measure
        clock: Clock to read (process CPU clock when None)

    Returns:
        (action's return value, signed elapsed microseconds)
    """
    clock = clock or default_clock()
    read = clock.read
    t0 = read()
    t1 = read()
    value = action()
    t2 = read()
    return value, clock.micros((t2 - t1) - (t1 - t0))


def corrected_measure(action: Callable[[], object], clock: CpuClock | None = None) -> float:
    """
    Measure ``action`` in microseconds as ``(t2 - t1) - (t1 - t0)``.

    The result may be slightly negative for actions cheaper than the clock's
    granularity; it is returned unclamped.
    """
    return corrected_call(action, clock)[1]
