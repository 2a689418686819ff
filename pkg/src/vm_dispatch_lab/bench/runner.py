"""
Benchmark runner: assemble a corpus case once, run it repeatedly, average.

Measured runs are strictly sequential so that process CPU-time readings are
not shared with concurrent work.
"""

import logging

from ..config import BenchConfig, LabConfig, RegExecConfig, StackExecConfig
from ..instrumentation import CpuClock, Metrics, aggregate_runs, default_clock
from ..register_vm import (
    RegProgram,
    execute_register,
    parse_register_source,
    register_instruction_mix,
)
from ..stack_vm import StackProgram, execute_stack, parse_stack_source, stack_instruction_mix
from ..types import RunResult
from .corpus import BenchmarkCase, suite_cases
from .report import BenchReport, compare_report

logger = logging.getLogger(__name__)

Program = StackProgram | RegProgram


def assemble(vm: str, text: str, memory_size: int = 65536) -> Program:
    """Assemble source text for the given machine."""
    if vm == "stack":
        return parse_stack_source(text)
    return parse_register_source(text, memory_size=memory_size)


def execute(
    program: Program,
    config: LabConfig | None = None,
    clock: CpuClock | None = None,
) -> RunResult:
    """Run a program on the machine its type belongs to."""
    config = config or LabConfig()
    if isinstance(program, StackProgram):
        return execute_stack(program, config.stack_vm, clock)
    return execute_register(program, config.register_vm, clock)


def instruction_mix(program: Program) -> dict[str, int]:
    """Static per-opcode instruction counts of a program for either machine."""
    if isinstance(program, StackProgram):
        return stack_instruction_mix(program)
    return register_instruction_mix(program)


def _bench_lab(lab: LabConfig, fine_timing: bool) -> LabConfig:
    # benchmark runs never echo program output
    return lab.model_copy(
        update={
            "stack_vm": StackExecConfig(
                stack_capacity=lab.stack_vm.stack_capacity,
                max_call_depth=lab.stack_vm.max_call_depth,
                fine_timing=fine_timing,
            ),
            "register_vm": RegExecConfig(
                memory_size=lab.register_vm.memory_size,
                max_call_depth=lab.register_vm.max_call_depth,
                fine_timing=fine_timing,
            ),
        }
    )


def run_case(
    case: BenchmarkCase,
    config: BenchConfig | None = None,
    lab: LabConfig | None = None,
    clock: CpuClock | None = None,
) -> Metrics:
    """
    Measure one corpus case.

    Args:
        case: Corpus entry to run
        config: Repetitions, warmup runs and timing mode
        lab: Interpreter limits (defaults when None)
        clock: CPU clock (process clock when None)

    Returns:
        Counts of the runs and arithmetic-mean times over the measured runs

    Raises:
        VMRuntimeError: Propagated from the interpreter
        CountInstabilityError: Two measured runs disagree on counts
    """
    config = config or BenchConfig()
    lab = _bench_lab(lab or LabConfig(), config.fine_timing)
    program = assemble(case.vm, case.source, lab.register_vm.memory_size)

    for _ in range(config.warmup):
        execute(program, lab, clock)

    runs = [execute(program, lab, clock).metrics for _ in range(config.repetitions)]
    metrics = aggregate_runs(runs)
    logger.info(
        f"{case.name}/{case.vm}: {metrics.dispatch_count} dispatches "
        f"({config.repetitions} run(s), {config.warmup} warmup)"
    )
    return metrics


def run_suite(
    names: tuple[str, ...],
    config: BenchConfig | None = None,
    lab: LabConfig | None = None,
    clock: CpuClock | None = None,
) -> BenchReport:
    """Run both machines for every requested benchmark and build the report."""
    config = config or BenchConfig()
    clock = clock or default_clock()
    results = {case.key: run_case(case, config, lab, clock) for case in suite_cases(names)}
    return compare_report(
        results,
        names,
        fine_timing=config.fine_timing,
        clock="process_time",
        clock_granularity_us=clock.granularity_us,
        repetitions=config.repetitions,
        warmup=config.warmup,
    )
