"""
Instrumented register machine interpreter.

Registers, memory and the program's constants share one flat cell array:
R0..R3 occupy cells 0..3, memory cell N sits at 4 + N and each distinct
constant is appended once after memory. Every non-label operand is decoded to
a cell index up front, so a handler reads and writes cells without looking
at operand kinds. Destinations are never constants, so constant cells are
never overwritten.

Each executed instruction costs one dispatch; fetches count the instruction
record plus one per operand.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass, field

from ..config import RegExecConfig
from ..errors import CallDepthExceeded, DivisionByZero, VMRuntimeError
from ..instrumentation import CpuClock, Metrics, Phase, corrected_call, default_clock, record_phase
from ..stack_vm.values import trunc_div, wrap_int32
from ..types import RunResult
from .program import REGISTER_COUNT, OperandKind, RegOpcode, RegProgram, validate_register_program

logger = logging.getLogger(__name__)

# (opcode, a, b, c, fetch cost); a/b/c are cell indices or jump targets
DecodedInstr = tuple[int, int, int, int, int]
Handler = Callable[[DecodedInstr, int], int]


@dataclass(frozen=True, slots=True)
class RegisterSnapshot:
    """Registers plus every memory address the program references, after a run."""

    registers: tuple[int, ...]
    memory: dict[int, int] = field(default_factory=dict)


class RegisterMachine:
    """Execution state of one register program run."""

    def __init__(self, program: RegProgram, config: RegExecConfig | None = None):
        config = config or RegExecConfig()
        self.program = program
        self.memory_size = config.memory_size
        self.max_call_depth = config.max_call_depth
        self.sink = config.sink

        self._base = REGISTER_COUNT + self.memory_size
        self.cells: list[int] = [0] * self._base
        self._constants: dict[int, int] = {}
        self._code: list[DecodedInstr] = [self._decode(i.opcode, i.operands) for i in program.instrs]

        self.returns: list[int] = []
        self.pc = 0
        self.halted = False
        self.output: list[str] = []
        self.dispatch_count = 0
        self.fetch_count = 0
        self._handlers: list[Handler] = self._build_handlers()

    def _cell(self, kind: OperandKind, value: int) -> int:
        if kind is OperandKind.REGISTER:
            return value
        if kind is OperandKind.MEMORY:
            return REGISTER_COUNT + value
        if kind is OperandKind.CONST:
            if value not in self._constants:
                self._constants[value] = len(self.cells)
                self.cells.append(value)
            return self._constants[value]
        return value  # label: absolute instruction index

    def _decode(self, opcode: RegOpcode, operands) -> DecodedInstr:
        slots = [self._cell(operand.kind, operand.value) for operand in operands]
        slots += [0] * (3 - len(slots))
        return (int(opcode), slots[0], slots[1], slots[2], 1 + len(operands))

    # ------------------------------------------------------------------
    # Execution
    # ------------------------------------------------------------------

    def run(self, fine_timing: bool, clock: CpuClock | None = None) -> Metrics:
        """Run from the current pc until RETURN on an empty stack or the end of code."""
        if fine_timing:
            return self._run_timed(clock or default_clock())
        return self._run_counted()

    def _run_counted(self) -> Metrics:
        code = self._code
        handlers = self._handlers
        end = len(code)
        dispatches = fetches = 0
        pc = self.pc
        try:
            while pc < end:
                instr = code[pc]
                dispatches += 1
                fetches += instr[4]
                pc = handlers[instr[0]](instr, pc)
        except VMRuntimeError as e:
            raise e.annotate(pc=pc) from None
        finally:
            self.pc = pc
            self.dispatch_count += dispatches
            self.fetch_count += fetches

        self.halted = True
        return Metrics(dispatch_count=dispatches, fetch_count=fetches)

    def _run_timed(self, clock: CpuClock) -> Metrics:
        code = self._code
        handlers = self._handlers
        read = clock.read
        end = len(code)
        dispatches = fetches = 0
        fetch_ticks = dispatch_ticks = 0
        pc = self.pc
        try:
            while pc < end:
                t0 = read()
                instr = code[pc]
                t1 = read()
                handler = handlers[instr[0]]
                t2 = read()
                fetch_ticks += t1 - t0
                dispatch_ticks += t2 - t1
                dispatches += 1
                fetches += instr[4]
                pc = handler(instr, pc)
        except VMRuntimeError as e:
            raise e.annotate(pc=pc) from None
        finally:
            self.pc = pc
            self.dispatch_count += dispatches
            self.fetch_count += fetches

        self.halted = True
        metrics = record_phase(Metrics(), Phase.FETCH, clock.micros(fetch_ticks), fetches)
        return record_phase(metrics, Phase.DISPATCH, clock.micros(dispatch_ticks), dispatches)

    def snapshot(self) -> RegisterSnapshot:
        addresses = sorted(
            {
                operand.value
                for instr in self.program.instrs
                for operand in instr.operands
                if operand.kind is OperandKind.MEMORY
            }
        )
        return RegisterSnapshot(
            registers=tuple(self.cells[:REGISTER_COUNT]),
            memory={address: self.cells[REGISTER_COUNT + address] for address in addresses},
        )

    # ------------------------------------------------------------------
    # Handlers: (instr, pc) -> next pc
    # ------------------------------------------------------------------

    def _build_handlers(self) -> list[Handler]:
        table: dict[RegOpcode, Handler] = {
            RegOpcode.ADD: self._op_add,
            RegOpcode.DIV: self._op_div,
            RegOpcode.MUL: self._op_mul,
            RegOpcode.LTN: self._op_ltn,
            RegOpcode.EQL: self._op_eql,
            RegOpcode.AND: self._op_and,
            RegOpcode.NOT: self._op_not,
            RegOpcode.OR: self._op_or,
            RegOpcode.INC: self._op_inc,
            RegOpcode.DEC: self._op_dec,
            RegOpcode.PRINT: self._op_print,
            RegOpcode.LOAD: self._op_load,
            RegOpcode.GOTO: self._op_goto,
            RegOpcode.IF: self._op_if,
            RegOpcode.RETURN: self._op_return,
            RegOpcode.CALL: self._op_call,
        }
        return [table[op] for op in RegOpcode]

    def _op_add(self, instr, pc):
        cells = self.cells
        cells[instr[1]] = wrap_int32(cells[instr[2]] + cells[instr[3]])
        return pc + 1

    def _op_div(self, instr, pc):
        cells = self.cells
        dividend, divisor = cells[instr[2]], cells[instr[3]]
        if divisor == 0:
            raise DivisionByZero(f"div: {dividend} / 0")
        cells[instr[1]] = wrap_int32(trunc_div(dividend, divisor))
        return pc + 1

    def _op_mul(self, instr, pc):
        cells = self.cells
        cells[instr[1]] = wrap_int32(cells[instr[2]] * cells[instr[3]])
        return pc + 1

    def _op_ltn(self, instr, pc):
        cells = self.cells
        cells[instr[1]] = 1 if cells[instr[2]] < cells[instr[3]] else 0
        return pc + 1

    def _op_eql(self, instr, pc):
        cells = self.cells
        cells[instr[1]] = 1 if cells[instr[2]] == cells[instr[3]] else 0
        return pc + 1

    def _op_and(self, instr, pc):
        cells = self.cells
        cells[instr[1]] = cells[instr[2]] & cells[instr[3]]
        return pc + 1

    def _op_or(self, instr, pc):
        cells = self.cells
        cells[instr[1]] = cells[instr[2]] | cells[instr[3]]
        return pc + 1

    def _op_not(self, instr, pc):
        # logical, not bitwise
        cells = self.cells
        cells[instr[1]] = 1 if cells[instr[2]] == 0 else 0
        return pc + 1

    def _op_inc(self, instr, pc):
        cells = self.cells
        cells[instr[1]] = wrap_int32(cells[instr[1]] + 1)
        return pc + 1

    def _op_dec(self, instr, pc):
        cells = self.cells
        cells[instr[1]] = wrap_int32(cells[instr[1]] - 1)
        return pc + 1

    def _op_print(self, instr, pc):
        line = str(self.cells[instr[1]])
        self.output.append(line)
        if self.sink is not None:
            self.sink.write(line + "\n")
        return pc + 1

    def _op_load(self, instr, pc):
        cells = self.cells
        cells[instr[1]] = cells[instr[2]]
        return pc + 1

    def _op_goto(self, instr, pc):
        return instr[1]

    def _op_if(self, instr, pc):
        return instr[2] if self.cells[instr[1]] == 0 else pc + 1

    def _op_call(self, instr, pc):
        if len(self.returns) >= self.max_call_depth:
            raise CallDepthExceeded(f"call P{instr[1]}: depth limit {self.max_call_depth} reached")
        self.returns.append(pc + 1)
        return instr[1]

    def _op_return(self, instr, pc):
        if self.returns:
            return self.returns.pop()
        return len(self._code)


def execute_register(
    program: RegProgram,
    config: RegExecConfig | None = None,
    clock: CpuClock | None = None,
) -> RunResult:
    """
    Run a register program from instruction 0 with zeroed registers and memory.

    Args:
        program: Assembled or decoded program (re-validated against the memory size)
        config: Interpreter configuration (defaults when None)
        clock: CPU clock for timing (process clock when None)

    Returns:
        RunResult with metrics, captured print output and the final state snapshot

    Raises:
        AddressOutOfRange: Program addresses memory beyond the configured size
        VMRuntimeError: Subclass annotated with the faulting pc
    """
    config = config or RegExecConfig()
    validate_register_program(program, config.memory_size)
    clock = clock or default_clock()

    machine = RegisterMachine(program, config)
    logger.debug(
        f"Running register program ({len(program.instrs)} instructions, "
        f"fine_timing={config.fine_timing})"
    )
    metrics, exec_time_us = corrected_call(lambda: machine.run(config.fine_timing, clock), clock)
    metrics = metrics.with_exec_time(exec_time_us)
    logger.debug(
        f"Register run finished: {metrics.dispatch_count} dispatches, "
        f"{metrics.fetch_count} fetches"
    )
    return RunResult(
        metrics=metrics,
        output=tuple(machine.output),
        final_state=machine.snapshot(),
    )
