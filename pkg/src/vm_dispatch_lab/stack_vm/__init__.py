"""
Stack-based virtual machine

Assembler, program model and instrumented interpreter for `.fng` programs:
two operand stacks (per-activation local, shared global), argument-less
procedure calls and runtime-tagged values.
"""

from .assembler import parse_stack_source
from .interpreter import HALT, OperandStack, StackMachine, execute_stack
from .program import (
    ProcedureDef,
    StackInstr,
    StackOpcode,
    StackOperandKind,
    StackProgram,
    format_stack_program,
    stack_instruction_mix,
    validate_stack_program,
)
from .values import Value, ValueTag, wrap_int32

__all__ = [
    "HALT",
    "OperandStack",
    "ProcedureDef",
    "StackInstr",
    "StackMachine",
    "StackOpcode",
    "StackOperandKind",
    "StackProgram",
    "Value",
    "ValueTag",
    "execute_stack",
    "format_stack_program",
    "parse_stack_source",
    "stack_instruction_mix",
    "validate_stack_program",
    "wrap_int32",
]
