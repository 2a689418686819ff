"""
Dispatch-count oracle for the benchmark corpus.

Counts are derived from the control flow of each listing without running
either machine. Straight-line programs reduce to closed forms of the shape
``prologue + per_iteration * iterations + epilogue``; ExhaustiveCollatz is
obtained by walking every trajectory and charging each branch its
instruction count.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache

from ..errors import UnknownCase
from .corpus import BenchmarkCase, canonical_name

logger = logging.getLogger(__name__)

FIBONACCI_STACK_ITERATIONS = 1000
FIBONACCI_REGISTER_ITERATIONS = 500
ADDICTIVE_ADDITION_ITERATIONS = 5_000_000
RECURSION_DEPTH = 1000
COLLATZ_LIMIT = 20000


@dataclass(frozen=True, slots=True)
class CollatzCosts:
    """Instructions executed by one listing per program phase."""

    prologue: int
    per_start: int
    per_odd_step: int
    per_even_step: int
    epilogue: int

    def total(self, starts: int, odd_steps: int, even_steps: int) -> int:
        return (
            self.prologue
            + self.per_start * starts
            + self.per_odd_step * odd_steps
            + self.per_even_step * even_steps
            + self.epilogue
        )


COLLATZ_STACK_COSTS = CollatzCosts(
    prologue=1, per_start=14, per_odd_step=18, per_even_step=16, epilogue=6
)
COLLATZ_REGISTER_COSTS = CollatzCosts(
    prologue=1, per_start=8, per_odd_step=11, per_even_step=10, epilogue=3
)


@lru_cache(maxsize=8)
def collatz_step_counts(limit: int = COLLATZ_LIMIT) -> tuple[int, int, int]:
    """
    Walk every start value 1..limit-1 down to 1.

    An odd value m becomes 3m+1 in one step (the halving happens on the next
    pass through the loop); an even value is halved.

    Returns:
        (starts, odd steps, even steps)
    """
    odd_steps = even_steps = 0
    for start in range(1, limit):
        value = start
        while value != 1:
            if value & 1:
                value = 3 * value + 1
                odd_steps += 1
            else:
                value //= 2
                even_steps += 1
    return limit - 1, odd_steps, even_steps


def _fibonacci(vm: str) -> int:
    if vm == "stack":
        return 5 + 14 * FIBONACCI_STACK_ITERATIONS + 7
    return 4 + 6 * FIBONACCI_REGISTER_ITERATIONS + 4


def _addictive_addition(vm: str) -> int:
    if vm == "stack":
        return 1 + 6 * ADDICTIVE_ADDITION_ITERATIONS + 5
    return 2 + 4 * ADDICTIVE_ADDITION_ITERATIONS + 3


def _recursion(vm: str) -> int:
    # descent per level, base case, one return per level, outer return
    if vm == "stack":
        return 3 + 8 * RECURSION_DEPTH + 6 + RECURSION_DEPTH + 1
    return 3 + 4 * RECURSION_DEPTH + 2 + (RECURSION_DEPTH + 1) + 2


def _exhaustive_collatz(vm: str) -> int:
    costs = COLLATZ_STACK_COSTS if vm == "stack" else COLLATZ_REGISTER_COSTS
    return costs.total(*collatz_step_counts(COLLATZ_LIMIT))


_FORMULAS = {
    "Fibonacci": _fibonacci,
    "ExhaustiveCollatz": _exhaustive_collatz,
    "AddictiveAddition": _addictive_addition,
    "Recursion": _recursion,
}


def expected_dispatches(case: BenchmarkCase | tuple[str, str]) -> int:
    """
    Oracle dispatch count of one corpus case.

    Args:
        case: BenchmarkCase or (name, vm) pair

    Returns:
        Number of instructions the machine executes for the listing

    Raises:
        UnknownCase: Name or machine outside the corpus
    """
    name, vm = (case.name, case.vm) if isinstance(case, BenchmarkCase) else case
    if vm not in ("stack", "register"):
        raise UnknownCase(f"Unknown machine '{vm}' (expected stack or register)")
    count = _FORMULAS[canonical_name(name)](vm)
    logger.debug(f"Oracle {name}/{vm}: {count} dispatches")
    return count
