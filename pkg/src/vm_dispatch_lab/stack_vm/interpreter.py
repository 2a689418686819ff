"""
Instrumented stack machine interpreter.

Each procedure activation gets a fresh local operand stack; all activations
share one global stack, the only channel for passing values between
procedures. A local stack is dropped as soon as its procedure returns.

Binary operations pop x (the former top) then y and push ``x OP y``; for
`idiv` the former top is the dividend.

Every executed instruction costs exactly one dispatch. Fetches count the
instruction record plus its operand, if present.

Activations are kept on an explicit frame stack rather than host recursion,
so call depth is bounded by ``max_call_depth`` only.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass

from ..config import StackExecConfig
from ..errors import (
    CallDepthExceeded,
    DivisionByZero,
    StackOverflow,
    StackUnderflow,
    TypeMismatch,
    VMRuntimeError,
)
from ..instrumentation import CpuClock, Metrics, Phase, corrected_call, default_clock, record_phase
from ..types import RunResult
from .program import StackInstr, StackOpcode, StackProgram, validate_stack_program
from .values import Value, render, tag_of, trunc_div, wrap_int32

logger = logging.getLogger(__name__)

HALT = -1

_OPCODE_INDEX = {op: index for index, op in enumerate(StackOpcode)}

Handler = Callable[[object, int], int]
DecodedInstr = tuple[int, object, int]


def _fetch_cost(instr: StackInstr) -> int:
    return 2 if instr.operand is not None else 1


class OperandStack:
    """Bounded LIFO of stack machine values."""

    __slots__ = ("items", "capacity", "name")

    def __init__(self, capacity: int, name: str = "local"):
        self.items: list = []
        self.capacity = capacity
        self.name = name

    def __len__(self) -> int:
        return len(self.items)

    def push(self, native: object) -> None:
        if isinstance(native, Value):
            native = native.native
        if len(self.items) >= self.capacity:
            raise StackOverflow(f"{self.name.capitalize()} stack full ({self.capacity} values)")
        tag_of(native)
        self.items.append(native)

    def pop(self, mnemonic: str = "pop") -> object:
        if not self.items:
            raise StackUnderflow(f"{mnemonic} on empty {self.name} stack")
        return self.items.pop()

    def values(self) -> tuple[Value, ...]:
        """Contents bottom to top as tagged values."""
        return tuple(Value.from_native(item) for item in self.items)


@dataclass(slots=True)
class _Frame:
    procedure: int
    return_pc: int
    local: OperandStack


class StackMachine:
    """
    Execution state of one stack program run.

    Holds the current procedure, program counter, local and global operand
    stacks, the suspended frames and the captured print output.
    """

    def __init__(self, program: StackProgram, config: StackExecConfig | None = None):
        config = config or StackExecConfig()
        self.program = program
        self.capacity = config.stack_capacity
        self.max_call_depth = config.max_call_depth
        self.sink = config.sink

        self._names = [procedure.name for procedure in program.procedures]
        self._procs: list[list[DecodedInstr]] = [
            [(_OPCODE_INDEX[i.opcode], _native(i.operand), _fetch_cost(i)) for i in p.instrs]
            for p in program.procedures
        ]

        self.global_stack = OperandStack(self.capacity, "global")
        self.local = OperandStack(self.capacity)
        self.frames: list[_Frame] = []
        self.procedure = 0
        self.pc = 0
        self.halted = False
        self.output: list[str] = []
        self.dispatch_count = 0
        self.fetch_count = 0
        self.main_stack: OperandStack | None = None

        self._stack = self.local.items
        self._code = self._procs[0]
        self._handlers: list[Handler] = self._build_handlers()

    # ------------------------------------------------------------------
    # Execution
    # ------------------------------------------------------------------

    def step(self, instr: StackInstr) -> int:
        """
        Execute one instruction against the current state.

        Returns:
            The next program counter (HALT when main returned)
        """
        opcode, operand, cost = (
            _OPCODE_INDEX[instr.opcode],
            _native(instr.operand),
            _fetch_cost(instr),
        )
        self.dispatch_count += 1
        self.fetch_count += cost
        try:
            self.pc = self._handlers[opcode](operand, self.pc)
        except VMRuntimeError as e:
            raise e.annotate(procedure=self._names[self.procedure], line=self.pc) from None
        self.halted = self.pc == HALT
        return self.pc

    def run(self, fine_timing: bool, clock: CpuClock | None = None) -> Metrics:
        """Run from the current state until main returns."""
        if fine_timing:
            return self._run_timed(clock or default_clock())
        return self._run_counted()

    def _run_counted(self) -> Metrics:
        handlers = self._handlers
        dispatches = fetches = 0
        pc = self.pc
        try:
            while pc != HALT:
                code = self._code
                if pc >= len(code):
                    pc = self._leave()
                    continue
                opcode, operand, cost = code[pc]
                dispatches += 1
                fetches += cost
                pc = handlers[opcode](operand, pc)
        except VMRuntimeError as e:
            raise e.annotate(procedure=self._names[self.procedure], line=pc) from None
        finally:
            self.pc = pc
            self.dispatch_count += dispatches
            self.fetch_count += fetches

        self.halted = True
        return Metrics(dispatch_count=dispatches, fetch_count=fetches)

    def _run_timed(self, clock: CpuClock) -> Metrics:
        handlers = self._handlers
        read = clock.read
        dispatches = fetches = 0
        fetch_ticks = dispatch_ticks = 0
        pc = self.pc
        try:
            while pc != HALT:
                code = self._code
                if pc >= len(code):
                    pc = self._leave()
                    continue
                t0 = read()
                opcode, operand, cost = code[pc]
                t1 = read()
                handler = handlers[opcode]
                t2 = read()
                fetch_ticks += t1 - t0
                dispatch_ticks += t2 - t1
                dispatches += 1
                fetches += cost
                pc = handler(operand, pc)
        except VMRuntimeError as e:
            raise e.annotate(procedure=self._names[self.procedure], line=pc) from None
        finally:
            self.pc = pc
            self.dispatch_count += dispatches
            self.fetch_count += fetches

        self.halted = True
        metrics = record_phase(Metrics(), Phase.FETCH, clock.micros(fetch_ticks), fetches)
        return record_phase(metrics, Phase.DISPATCH, clock.micros(dispatch_ticks), dispatches)

    def result(self) -> Value | None:
        """Bottom element of main's local stack after the run, if any."""
        stack = self.main_stack if self.main_stack is not None else self.local
        values = stack.values()
        return values[0] if values else None

    # ------------------------------------------------------------------
    # Helpers
    # ------------------------------------------------------------------

    def _leave(self) -> int:
        """Return from the current activation, discarding its local stack."""
        if not self.frames:
            self.main_stack = self.local
            return HALT
        frame = self.frames.pop()
        self.procedure = frame.procedure
        self.local = frame.local
        self._stack = frame.local.items
        self._code = self._procs[frame.procedure]
        return frame.return_pc

    def _push(self, native: object) -> None:
        stack = self._stack
        if len(stack) >= self.capacity:
            raise StackOverflow(f"Local stack full ({self.capacity} values)")
        stack.append(native)

    def _pop(self, mnemonic: str) -> object:
        stack = self._stack
        if not stack:
            raise StackUnderflow(f"{mnemonic} on empty local stack")
        return stack.pop()

    def _pop2(self, mnemonic: str) -> tuple[object, object]:
        stack = self._stack
        if len(stack) < 2:
            raise StackUnderflow(f"{mnemonic} needs 2 operands, local stack holds {len(stack)}")
        return stack.pop(), stack.pop()

    def _pop2_int(self, mnemonic: str) -> tuple[int, int]:
        x, y = self._pop2(mnemonic)
        if type(x) is not int or type(y) is not int:
            raise TypeMismatch(f"{mnemonic} expects Int operands, got {tag_of(x)} and {tag_of(y)}")
        return x, y

    def _pop2_float(self, mnemonic: str) -> tuple[float, float]:
        x, y = self._pop2(mnemonic)
        if type(x) is not float or type(y) is not float:
            raise TypeMismatch(
                f"{mnemonic} expects Float operands, got {tag_of(x)} and {tag_of(y)}"
            )
        return x, y

    # ------------------------------------------------------------------
    # Handlers: (operand, pc) -> next pc
    # ------------------------------------------------------------------

    def _build_handlers(self) -> list[Handler]:
        table: dict[StackOpcode, Handler] = {
            StackOpcode.ICONST: self._op_const,
            StackOpcode.FCONST: self._op_const,
            StackOpcode.CCONST: self._op_const,
            StackOpcode.BCONST: self._op_const,
            StackOpcode.IADD: self._op_iadd,
            StackOpcode.IMUL: self._op_imul,
            StackOpcode.IDIV: self._op_idiv,
            StackOpcode.FADD: self._op_fadd,
            StackOpcode.FMUL: self._op_fmul,
            StackOpcode.FDIV: self._op_fdiv,
            StackOpcode.ILT: self._op_ilt,
            StackOpcode.IGT: self._op_igt,
            StackOpcode.IEQ: self._op_ieq,
            StackOpcode.IF: self._op_if,
            StackOpcode.NE: self._op_ne,
            StackOpcode.AND: self._op_and,
            StackOpcode.OR: self._op_or,
            StackOpcode.XOR: self._op_xor,
            StackOpcode.DUP: self._op_dup,
            StackOpcode.SWAP: self._op_swap,
            StackOpcode.INC: self._op_inc,
            StackOpcode.DEC: self._op_dec,
            StackOpcode.POP: self._op_pop,
            StackOpcode.GLOAD: self._op_gload,
            StackOpcode.GSTORE: self._op_gstore,
            StackOpcode.PRINT: self._op_print,
            StackOpcode.CALL: self._op_call,
            StackOpcode.RET: self._op_ret,
            StackOpcode.TER: self._op_ret,
            StackOpcode.GOTO: self._op_goto,
            StackOpcode.IF_ICMPLE: self._op_if_icmple,
        }
        return [table[op] for op in StackOpcode]

    def _op_const(self, operand, pc):
        self._push(operand)
        return pc + 1

    def _op_iadd(self, operand, pc):
        x, y = self._pop2_int("iadd")
        self._stack.append(wrap_int32(x + y))
        return pc + 1

    def _op_imul(self, operand, pc):
        x, y = self._pop2_int("imul")
        self._stack.append(wrap_int32(x * y))
        return pc + 1

    def _op_idiv(self, operand, pc):
        x, y = self._pop2_int("idiv")
        if y == 0:
            raise DivisionByZero(f"idiv: {x} / 0")
        self._stack.append(wrap_int32(trunc_div(x, y)))
        return pc + 1

    def _op_fadd(self, operand, pc):
        x, y = self._pop2_float("fadd")
        self._stack.append(x + y)
        return pc + 1

    def _op_fmul(self, operand, pc):
        x, y = self._pop2_float("fmul")
        self._stack.append(x * y)
        return pc + 1

    def _op_fdiv(self, operand, pc):
        x, y = self._pop2_float("fdiv")
        if y == 0.0:
            raise DivisionByZero(f"fdiv: {x} / 0.0")
        self._stack.append(x / y)
        return pc + 1

    def _op_ilt(self, operand, pc):
        x, y = self._pop2_int("ilt")
        self._stack.append(x < y)
        return pc + 1

    def _op_igt(self, operand, pc):
        x, y = self._pop2_int("igt")
        self._stack.append(x > y)
        return pc + 1

    def _op_ieq(self, operand, pc):
        x, y = self._pop2_int("ieq")
        self._stack.append(x == y)
        return pc + 1

    def _op_if(self, operand, pc):
        q, p = self._pop2("if")
        if type(q) is not bool or type(p) is not bool:
            raise TypeMismatch(f"if expects Bool operands, got {tag_of(p)} and {tag_of(q)}")
        self._stack.append((not p) or q)
        return pc + 1

    def _op_ne(self, operand, pc):
        x = self._pop("ne")
        if type(x) is bool:
            self._stack.append(not x)
        elif type(x) is int and x in (0, 1):
            self._stack.append(1 - x)
        else:
            raise TypeMismatch(f"ne expects Bool or Int 0/1, got {tag_of(x)} {render(x)}")
        return pc + 1

    def _bitwise(self, mnemonic: str, combine: Callable[[int, int], int]) -> None:
        x, y = self._pop2(mnemonic)
        tx, ty = type(x), type(y)
        if tx is not ty or tx not in (bool, int):
            raise TypeMismatch(
                f"{mnemonic} expects two Bool or two Int operands, got {tag_of(x)} and {tag_of(y)}"
            )
        # bool & bool stays bool in Python, int & int stays int
        self._stack.append(combine(x, y))  # type: ignore[arg-type]

    def _op_and(self, operand, pc):
        self._bitwise("and", lambda x, y: x & y)
        return pc + 1

    def _op_or(self, operand, pc):
        self._bitwise("or", lambda x, y: x | y)
        return pc + 1

    def _op_xor(self, operand, pc):
        self._bitwise("xor", lambda x, y: x ^ y)
        return pc + 1

    def _op_dup(self, operand, pc):
        stack = self._stack
        if not stack:
            raise StackUnderflow("dup on empty local stack")
        self._push(stack[-1])
        return pc + 1

    def _op_swap(self, operand, pc):
        stack = self._stack
        if len(stack) < 2:
            raise StackUnderflow(f"swap needs 2 operands, local stack holds {len(stack)}")
        stack[-1], stack[-2] = stack[-2], stack[-1]
        return pc + 1

    def _op_inc(self, operand, pc):
        stack = self._stack
        if not stack:
            raise StackUnderflow("inc on empty local stack")
        top = stack[-1]
        if type(top) is not int:
            raise TypeMismatch(f"inc expects Int, got {tag_of(top)}")
        stack[-1] = wrap_int32(top + 1)
        return pc + 1

    def _op_dec(self, operand, pc):
        stack = self._stack
        if not stack:
            raise StackUnderflow("dec on empty local stack")
        top = stack[-1]
        if type(top) is not int:
            raise TypeMismatch(f"dec expects Int, got {tag_of(top)}")
        stack[-1] = wrap_int32(top - 1)
        return pc + 1

    def _op_pop(self, operand, pc):
        self._pop("pop")
        return pc + 1

    def _op_gload(self, operand, pc):
        self._push(self.global_stack.pop("gload"))
        return pc + 1

    def _op_gstore(self, operand, pc):
        self.global_stack.push(self._pop("gstore"))
        return pc + 1

    def _op_print(self, operand, pc):
        line = render(self._pop("print"))
        self.output.append(line)
        if self.sink is not None:
            self.sink.write(line + "\n")
        return pc + 1

    def _op_call(self, operand, pc):
        if len(self.frames) >= self.max_call_depth:
            raise CallDepthExceeded(
                f"call {self._names[operand]}: depth limit {self.max_call_depth} reached"
            )
        self.frames.append(_Frame(self.procedure, pc + 1, self.local))
        self.procedure = operand
        self.local = OperandStack(self.capacity)
        self._stack = self.local.items
        self._code = self._procs[operand]
        return 0

    def _op_ret(self, operand, pc):
        return self._leave()

    def _op_goto(self, operand, pc):
        return operand

    def _op_if_icmple(self, operand, pc):
        x = self._pop("if_icmple")
        tx = type(x)
        if tx is bool:
            falsy = not x
        elif tx is int:
            falsy = x == 0
        else:
            raise TypeMismatch(f"if_icmple expects Bool or Int, got {tag_of(x)}")
        return operand if falsy else pc + 1


def _native(operand: Value | int | None) -> object:
    return operand.native if isinstance(operand, Value) else operand


def execute_stack(
    program: StackProgram,
    config: StackExecConfig | None = None,
    clock: CpuClock | None = None,
) -> RunResult:
    """
    Run a stack program from `main` with fresh local and global stacks.

    Args:
        program: Assembled program (re-validated here)
        config: Interpreter configuration (defaults when None)
        clock: CPU clock for timing (process clock when None)

    Returns:
        RunResult with metrics, captured print output and main's bottom value

    Raises:
        VMRuntimeError: Subclass annotated with procedure name and line
    """
    config = config or StackExecConfig()
    validate_stack_program(program)
    clock = clock or default_clock()

    machine = StackMachine(program, config)
    logger.debug(
        f"Running stack program ({program.instruction_count} instructions, "
        f"fine_timing={config.fine_timing})"
    )
    metrics, exec_time_us = corrected_call(lambda: machine.run(config.fine_timing, clock), clock)
    metrics = metrics.with_exec_time(exec_time_us)
    logger.debug(
        f"Stack run finished: {metrics.dispatch_count} dispatches, {metrics.fetch_count} fetches"
    )
    return RunResult(
        metrics=metrics,
        output=tuple(machine.output),
        result=machine.result(),
    )
