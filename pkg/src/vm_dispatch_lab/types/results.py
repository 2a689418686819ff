"""
Result of one program execution, shared by both interpreters.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from ..instrumentation.metrics import Metrics
    from ..register_vm.interpreter import RegisterSnapshot
    from ..stack_vm.values import Value


@dataclass(frozen=True, slots=True)
class RunResult:
    """
    Outcome of one run.

    Attributes:
        metrics: Counts and times of the run
        output: Lines written by print, in order
        result: Stack machine only; bottom value of main's local stack
        final_state: Register machine only; registers and touched memory
    """

    metrics: Metrics
    output: tuple[str, ...] = ()
    result: Value | None = None
    final_state: RegisterSnapshot | None = None
