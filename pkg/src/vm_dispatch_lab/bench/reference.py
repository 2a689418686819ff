"""
Published reference measurements.

Dispatch counts and phase times (microseconds) reported for the original
C implementations of both machines on their authors' host. Shown next to
local results; never asserted against them, since the times are hardware
bound.
"""

from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class PublishedRun:
    dispatch_count: int
    fetch_time_us: float
    dispatch_time_us: float
    exec_time_us: float


PUBLISHED: dict[tuple[str, str], PublishedRun] = {
    ("Fibonacci", "stack"): PublishedRun(14012, 6126.867, 7319.733, 25711.0),
    ("Fibonacci", "register"): PublishedRun(3008, 2690.133, 1339.067, 8058.4),
    ("ExhaustiveCollatz", "stack"): PublishedRun(
        30850935, 11887959.87, 14282572.93, 50052119.67
    ),
    ("ExhaustiveCollatz", "register"): PublishedRun(
        19114675, 19784777.33, 7802168.267, 55919524.4
    ),
    ("AddictiveAddition", "stack"): PublishedRun(
        35000007, 11641908.53, 13959241.13, 48963810.0
    ),
    ("AddictiveAddition", "register"): PublishedRun(
        20000005, 19557117.27, 8425430.067, 56730777.0
    ),
    ("Recursion", "stack"): PublishedRun(9010, 3884.733, 8208.6, 20109.0),
    ("Recursion", "register"): PublishedRun(5008, 4543.067, 394.2, 12018.133),
}

# Headline percentages as stated alongside the figures (stack minus register, % of stack)
PUBLISHED_EXEC_TIME_PCT = 20.39
PUBLISHED_DISPATCH_TIME_PCT = 66.42
PUBLISHED_FETCH_TIME_PCT = -23.5


def published_dispatches(name: str, vm: str) -> int:
    return PUBLISHED[(name, vm)].dispatch_count
