"""
Register-based virtual machine

Assembler, binary codec and instrumented interpreter for `.gnf` programs:
four registers and one flat global memory, integer-only, operator-first
instructions with up to three operands.
"""

from .assembler import parse_register_source
from .codec import (
    HEADER_SIZE,
    MAGIC,
    RECORD_SIZE,
    decode_register_program,
    encode_register_program,
)
from .interpreter import RegisterMachine, RegisterSnapshot, execute_register
from .program import (
    REGISTER_COUNT,
    Operand,
    OperandKind,
    RegInstr,
    RegOpcode,
    RegProgram,
    disassemble_register_program,
    register_instruction_mix,
    validate_register_program,
)

__all__ = [
    "HEADER_SIZE",
    "MAGIC",
    "RECORD_SIZE",
    "REGISTER_COUNT",
    "Operand",
    "OperandKind",
    "RegInstr",
    "RegOpcode",
    "RegProgram",
    "RegisterMachine",
    "RegisterSnapshot",
    "decode_register_program",
    "disassemble_register_program",
    "encode_register_program",
    "execute_register",
    "parse_register_source",
    "register_instruction_mix",
    "validate_register_program",
]
