"""
Tests for the stack machine interpreter.

Covers every opcode, the error paths and the dispatch/fetch accounting.
Binary operations pop x (the former top) then y and push x OP y.
"""

import io

import pytest

from vm_dispatch_lab.config import StackExecConfig
from vm_dispatch_lab.errors import (
    CallDepthExceeded,
    DivisionByZero,
    StackOverflow,
    StackUnderflow,
    TypeMismatch,
    VMRuntimeError,
)
from vm_dispatch_lab.stack_vm import (
    HALT,
    OperandStack,
    StackInstr,
    StackMachine,
    StackOpcode,
    Value,
    execute_stack,
    parse_stack_source,
)


def run_main(body: str, **config):
    """Assemble `body` as main (plus any later procedures) and run it counts-only."""
    program = parse_stack_source("procedure main\n" + body)
    return execute_stack(program, StackExecConfig(fine_timing=False, **config))


def result_of(body: str):
    return run_main(body).result.native


class TestArithmetic:
    """Test Int and Float arithmetic."""

    def test_iadd(self):
        """Test iadd."""
        assert result_of("iconst 2\niconst 3\niadd\n") == 5

    def test_imul_wraps(self):
        """Test imul wraps modulo 2**32."""
        assert result_of("iconst 65536\niconst 65536\nimul\n") == 0
        assert result_of("iconst 2147483647\niconst 1\niadd\n") == -2147483648

    def test_idiv_former_top_is_dividend(self):
        """Test idiv divides the former top by the value below it."""
        assert result_of("iconst 2\niconst 7\nidiv\n") == 3
        assert result_of("iconst 2\niconst -7\nidiv\n") == -3

    def test_float_ops(self):
        """Test fadd, fmul and fdiv."""
        assert result_of("fconst 1.5\nfconst 2.0\nfadd\n") == 3.5
        assert result_of("fconst 1.5\nfconst 2.0\nfmul\n") == 3.0
        assert result_of("fconst 2.0\nfconst 1.0\nfdiv\n") == 0.5

    def test_inc_dec(self):
        """Test inc and dec modify the top in place."""
        assert result_of("iconst 4\ninc\ninc\ndec\n") == 5

    def test_inc_dec_wrap(self):
        """Test inc and dec wrap at the 32-bit boundaries."""
        assert result_of("iconst 2147483647\ninc\n") == -2147483648
        assert result_of("iconst -2147483648\ndec\n") == 2147483647

    def test_idiv_by_zero(self):
        """Test integer division by zero."""
        with pytest.raises(DivisionByZero):
            run_main("iconst 0\niconst 1\nidiv\n")

    def test_fdiv_by_zero(self):
        """Test float division by zero."""
        with pytest.raises(DivisionByZero):
            run_main("fconst 0.0\nfconst 1.0\nfdiv\n")

    def test_mixed_types_rejected(self):
        """Test iadd refuses a Float operand."""
        with pytest.raises(TypeMismatch):
            run_main("iconst 1\nfconst 1.0\niadd\n")


class TestComparisonsAndLogic:
    """Test comparisons and boolean/bitwise operations."""

    def test_ilt_igt_ieq(self):
        """Test comparisons apply as x OP y with x the former top."""
        assert result_of("iconst 5\niconst 3\nilt\n") is True
        assert result_of("iconst 5\niconst 3\nigt\n") is False
        assert result_of("iconst 3\niconst 3\nieq\n") is True

    def test_if_is_implication(self):
        """Test `if` pushes (not p) or q with q the former top."""
        assert result_of("bconst 1\nbconst 0\nif\n") is False
        assert result_of("bconst 0\nbconst 0\nif\n") is True
        assert result_of("bconst 1\nbconst 1\nif\n") is True

    def test_if_requires_bool(self):
        """Test `if` rejects Int operands."""
        with pytest.raises(TypeMismatch):
            run_main("iconst 1\nbconst 1\nif\n")

    def test_ne(self):
        """Test ne negates Bool and Int 0/1."""
        assert result_of("bconst 1\nne\n") is False
        assert result_of("iconst 0\nne\n") == 1
        with pytest.raises(TypeMismatch):
            run_main("iconst 5\nne\n")

    def test_and_or_xor(self):
        """Test logical on Bool and bitwise on Int."""
        assert result_of("bconst 1\nbconst 0\nand\n") is False
        assert result_of("bconst 1\nbconst 0\nor\n") is True
        assert result_of("bconst 1\nbconst 1\nxor\n") is False
        assert result_of("iconst 7\niconst 1\nand\n") == 1
        assert result_of("iconst 4\niconst 1\nor\n") == 5
        assert result_of("iconst 6\niconst 3\nxor\n") == 5

    def test_and_rejects_mixed(self):
        """Test and refuses a Bool/Int mix."""
        with pytest.raises(TypeMismatch):
            run_main("bconst 1\niconst 1\nand\n")


class TestStackOps:
    """Test stack manipulation."""

    def test_dup_swap_pop(self):
        """Test dup, swap and pop."""
        result = run_main("iconst 1\niconst 2\nswap\ndup\npop\n")
        assert result.result == Value.integer(2)

    def test_swap_order(self):
        """Test swap exchanges the two top values."""
        assert result_of("iconst 10\niconst 2\nidiv\n") == 0
        assert result_of("iconst 10\niconst 2\nswap\nidiv\n") == 5

    def test_constants(self):
        """Test every constant opcode pushes its literal."""
        assert result_of("cconst q\n") == "q"
        assert result_of("bconst 1\n") is True
        assert result_of("fconst 0.5\n") == 0.5

    def test_underflow(self):
        """Test iadd with a single operand."""
        with pytest.raises(StackUnderflow) as exc_info:
            run_main("iconst 1\niadd\n")
        assert exc_info.value.procedure == "main"
        assert exc_info.value.line == 1
        assert "procedure main, line 1" in str(exc_info.value)

    def test_overflow(self):
        """Test pushing past the capacity."""
        with pytest.raises(StackOverflow):
            run_main("iconst 1\ngoto 0\n", stack_capacity=16)

    def test_pop_empty(self):
        """Test pop on an empty stack."""
        with pytest.raises(StackUnderflow):
            run_main("pop\n")


class TestControlFlow:
    """Test jumps, calls and returns."""

    def test_goto_and_if_icmple(self):
        """Test if_icmple jumps on a falsy value only."""
        assert result_of("iconst 0\nif_icmple 3\niconst 7\niconst 9\n") == 9
        assert result_of("iconst 1\nif_icmple 3\niconst 7\niconst 9\n") == 7
        assert result_of("bconst 0\nif_icmple 3\niconst 7\niconst 9\n") == 9
        assert result_of("goto 2\niconst 7\niconst 9\n") == 9

    def test_if_icmple_rejects_char(self):
        """Test if_icmple needs Bool or Int."""
        with pytest.raises(TypeMismatch):
            run_main("cconst a\nif_icmple 0\n")

    def test_global_stack_passes_values(self):
        """Test gstore/gload carry values across calls."""
        body = "iconst 5\ngstore\ncall f\ngload\nret\nprocedure f\ngload\ninc\ngstore\nret\n"
        assert result_of(body) == 6

    def test_gload_empty(self):
        """Test gload on an empty global stack."""
        with pytest.raises(StackUnderflow):
            run_main("gload\n")

    def test_local_stack_dropped_on_return(self):
        """Test callee values never reach the caller's local stack."""
        result = run_main("iconst 9\ncall f\nret\nprocedure f\niconst 1\niconst 2\nret\n")
        assert result.result == Value.integer(9)

    def test_ter_returns_midway(self):
        """Test ter leaves the procedure immediately."""
        result = run_main("call f\niconst 3\nret\nprocedure f\nter\ngstore\n")
        assert result.result == Value.integer(3)
        assert result.metrics.dispatch_count == 4

    def test_fall_off_end_halts(self):
        """Test a main without ret halts at the end of its code."""
        result = run_main("iconst 1\n")
        assert result.result == Value.integer(1)
        assert result.metrics.dispatch_count == 1

    def test_call_depth_limit(self):
        """Test unbounded recursion stops at max_call_depth."""
        with pytest.raises(CallDepthExceeded):
            run_main("call main\n", max_call_depth=50)

    def test_call_depth_counts_open_calls(self):
        """Test max_call_depth=1 allows one open call and refuses a nested one."""
        result = run_main("call f\niconst 1\nret\nprocedure f\nret\n", max_call_depth=1)
        assert result.result == Value.integer(1)
        with pytest.raises(CallDepthExceeded):
            run_main(
                "call f\nret\nprocedure f\ncall g\nret\nprocedure g\nret\n", max_call_depth=1
            )

    def test_recursion_listing_at_minimum_depth(self, recursion_stack):
        """Test the Recursion listing fits in a call depth of 1001."""
        config = StackExecConfig(fine_timing=False, max_call_depth=1001)
        assert execute_stack(recursion_stack, config).metrics.dispatch_count == 9010

    def test_recursion_listing(self, recursion_stack, stack_config):
        """Test the Recursion listing runs to completion."""
        result = execute_stack(recursion_stack, stack_config)
        assert result.metrics.dispatch_count == 9010
        assert result.result is None


class TestOutput:
    """Test print."""

    def test_print_captured(self):
        """Test print output is captured in order."""
        result = run_main("iconst 42\nprint\nbconst 1\nprint\ncconst x\nprint\nret\n")
        assert result.output == ("42", "true", "x")

    def test_print_to_sink(self):
        """Test print writes to the configured sink."""
        sink = io.StringIO()
        program = parse_stack_source("procedure main\niconst 7\nprint\n")
        execute_stack(program, StackExecConfig(fine_timing=False, sink=sink))
        assert sink.getvalue() == "7\n"

    def test_fibonacci_prints_once(self, fibonacci_stack, stack_config):
        """Test Fibonacci prints a single value."""
        result = execute_stack(fibonacci_stack, stack_config)
        assert len(result.output) == 1
        assert result.metrics.dispatch_count == 14012


class TestAccounting:
    """Test dispatch and fetch counting."""

    def test_counts(self):
        """Test one dispatch per instruction, one extra fetch per operand."""
        metrics = run_main("iconst 1\ndup\nret\n").metrics
        assert metrics.dispatch_count == 3
        assert metrics.fetch_count == 4

    def test_timed_loop_with_ticking_clock(self, ticking_clock):
        """Test phase times with a clock advancing 1 us per read."""
        program = parse_stack_source("procedure main\niconst 1\nret\n")
        result = execute_stack(program, StackExecConfig(fine_timing=True), ticking_clock)
        metrics = result.metrics
        assert metrics.dispatch_count == 2
        assert metrics.fetch_time_us == 2.0
        assert metrics.dispatch_time_us == 2.0
        assert metrics.exec_time_us == 6.0

    def test_counts_independent_of_timing(self, fibonacci_stack, ticking_clock):
        """Test counts are identical with timing on and off."""
        timed = execute_stack(fibonacci_stack, StackExecConfig(fine_timing=True), ticking_clock)
        counted = execute_stack(fibonacci_stack, StackExecConfig(fine_timing=False))
        assert timed.metrics.counts == counted.metrics.counts

    @pytest.mark.parametrize("fine_timing", [True, False])
    def test_counts_kept_on_error(self, fine_timing, ticking_clock):
        """Test machine counts include the faulting instruction in both modes."""
        machine = StackMachine(parse_stack_source("procedure main\niconst 1\npop\npop\n"))
        with pytest.raises(StackUnderflow):
            machine.run(fine_timing, ticking_clock)
        assert machine.dispatch_count == 3
        assert machine.fetch_count == 4
        assert machine.pc == 2


class TestStackMachine:
    """Test the machine object directly."""

    def test_step(self):
        """Test single-stepping instructions against machine state."""
        program = parse_stack_source("procedure main\nret\n")
        machine = StackMachine(program)
        machine.step(StackInstr(StackOpcode.ICONST, Value.integer(2)))
        machine.step(StackInstr(StackOpcode.ICONST, Value.integer(3)))
        assert machine.step(StackInstr(StackOpcode.IADD)) == 3
        assert machine.local.values() == (Value.integer(5),)
        assert machine.dispatch_count == 3
        assert machine.fetch_count == 5

    def test_step_ret_halts(self):
        """Test ret from main halts."""
        machine = StackMachine(parse_stack_source("procedure main\nret\n"))
        assert machine.step(StackInstr(StackOpcode.RET)) == HALT
        assert machine.halted

    def test_step_error_annotated(self):
        """Test step annotates runtime errors."""
        machine = StackMachine(parse_stack_source("procedure main\nret\n"))
        with pytest.raises(VMRuntimeError) as exc_info:
            machine.step(StackInstr(StackOpcode.POP))
        assert exc_info.value.procedure == "main"


class TestOperandStack:
    """Test the bounded operand stack."""

    def test_push_pop(self):
        """Test LIFO order and tagged values."""
        stack = OperandStack(capacity=16)
        stack.push(Value.integer(1))
        stack.push(True)
        assert stack.pop() is True
        assert stack.values() == (Value.integer(1),)

    def test_limits(self):
        """Test overflow, underflow and type checks."""
        stack = OperandStack(capacity=1)
        stack.push(1)
        with pytest.raises(StackOverflow):
            stack.push(2)
        stack.pop()
        with pytest.raises(StackUnderflow):
            stack.pop()
        with pytest.raises(TypeError):
            stack.push([1])

    def test_global_stack_limits(self):
        """Test gload and gstore go through the bounded global stack."""
        with pytest.raises(StackUnderflow, match="gload on empty global stack"):
            run_main("gload\n")
        with pytest.raises(StackOverflow, match="Global stack full"):
            run_main("iconst 1\ngstore\ngoto 0\n", stack_capacity=16)
