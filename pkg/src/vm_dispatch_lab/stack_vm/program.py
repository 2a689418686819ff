"""
Stack machine program representation.

A program is an ordered list of procedures, `main` first. Each procedure is
an array of instructions; an instruction is an opcode plus at most one
operand. Jump operands are 0-based line indices within the enclosing
procedure, call operands are procedure indices.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum, StrEnum

from ..errors import JumpOutOfRange, MalformedOperand, MissingMain, UnknownProcedure
from .values import Value, ValueTag

logger = logging.getLogger(__name__)

# Quoted char escapes; anything else unprintable, blank or `;` is written \xHH
CHAR_ESCAPES = {"\\s": " ", "\\t": "\t", "\\n": "\n", "\\\\": "\\"}
_ESCAPED_CHARS = {char: escape for escape, char in CHAR_ESCAPES.items()}


def char_literal(char: str) -> str:
    """Quoted source form of a char operand that reassembles to the same char."""
    if char in _ESCAPED_CHARS:
        return f"'{_ESCAPED_CHARS[char]}'"
    if char == ";" or char.isspace() or not char.isprintable():
        return f"'\\x{ord(char):02x}'"
    return f"'{char}'"


class StackOpcode(StrEnum):
    """Stack machine instruction set; the value is the source mnemonic."""

    ICONST = "iconst"
    FCONST = "fconst"
    CCONST = "cconst"
    BCONST = "bconst"
    IADD = "iadd"
    IMUL = "imul"
    IDIV = "idiv"
    FADD = "fadd"
    FMUL = "fmul"
    FDIV = "fdiv"
    ILT = "ilt"
    IGT = "igt"
    IEQ = "ieq"
    IF = "if"
    NE = "ne"
    AND = "and"
    OR = "or"
    XOR = "xor"
    DUP = "dup"
    SWAP = "swap"
    INC = "inc"
    DEC = "dec"
    POP = "pop"
    GLOAD = "gload"
    GSTORE = "gstore"
    PRINT = "print"
    CALL = "call"
    RET = "ret"
    TER = "ter"
    GOTO = "goto"
    IF_ICMPLE = "if_icmple"

    @property
    def operand_kind(self) -> "StackOperandKind":
        return OPERAND_KINDS.get(self, StackOperandKind.NONE)

    @property
    def arity(self) -> int:
        return 0 if self.operand_kind is StackOperandKind.NONE else 1


class StackOperandKind(Enum):
    NONE = "none"
    INT = "int"
    FLOAT = "float"
    CHAR = "char"
    BOOL = "bool"
    LINE = "line"
    PROCEDURE = "procedure"


OPERAND_KINDS: dict[StackOpcode, StackOperandKind] = {
    StackOpcode.ICONST: StackOperandKind.INT,
    StackOpcode.FCONST: StackOperandKind.FLOAT,
    StackOpcode.CCONST: StackOperandKind.CHAR,
    StackOpcode.BCONST: StackOperandKind.BOOL,
    StackOpcode.CALL: StackOperandKind.PROCEDURE,
    StackOpcode.GOTO: StackOperandKind.LINE,
    StackOpcode.IF_ICMPLE: StackOperandKind.LINE,
}

_CONSTANT_TAGS = {
    StackOperandKind.INT: ValueTag.INT,
    StackOperandKind.FLOAT: ValueTag.FLOAT,
    StackOperandKind.CHAR: ValueTag.CHAR,
    StackOperandKind.BOOL: ValueTag.BOOL,
}


@dataclass(frozen=True, slots=True)
class StackInstr:
    """One instruction: opcode and its optional operand."""

    opcode: StackOpcode
    operand: Value | int | None = None

    def __str__(self) -> str:
        if self.operand is None:
            return self.opcode.value
        if isinstance(self.operand, Value):
            if self.operand.tag is ValueTag.BOOL:
                return f"{self.opcode.value} {int(self.operand.payload)}"
            if self.operand.tag is ValueTag.CHAR:
                return f"{self.opcode.value} {char_literal(str(self.operand.payload))}"
            return f"{self.opcode.value} {self.operand.payload}"
        return f"{self.opcode.value} {self.operand}"


@dataclass(frozen=True, slots=True)
class ProcedureDef:
    name: str
    instrs: tuple[StackInstr, ...]


@dataclass(frozen=True, slots=True)
class StackProgram:
    """Ordered procedures; index 0 is `main`."""

    procedures: tuple[ProcedureDef, ...]

    @property
    def instruction_count(self) -> int:
        return sum(len(p.instrs) for p in self.procedures)


def _check_operand(instr: StackInstr, procedure: ProcedureDef, program: StackProgram) -> None:
    kind = instr.opcode.operand_kind
    operand = instr.operand
    where = f"{procedure.name}: {instr.opcode.value}"

    if kind is StackOperandKind.NONE:
        if operand is not None:
            raise MalformedOperand(f"{where} takes no operand")
        return

    if kind in _CONSTANT_TAGS:
        if not isinstance(operand, Value) or operand.tag is not _CONSTANT_TAGS[kind]:
            raise MalformedOperand(f"{where} needs a {_CONSTANT_TAGS[kind]} literal")
        return

    if type(operand) is not int:
        raise MalformedOperand(f"{where} needs an index operand")
    if kind is StackOperandKind.LINE and not 0 <= operand < len(procedure.instrs):
        raise JumpOutOfRange(
            f"{where} target {operand} outside [0, {len(procedure.instrs)})"
        )
    if kind is StackOperandKind.PROCEDURE and not 0 <= operand < len(program.procedures):
        raise UnknownProcedure(f"{where} calls procedure index {operand}, which does not exist")


def validate_stack_program(program: StackProgram) -> None:
    """
    Check the assembly invariants of a (possibly hand-built) program.

    Raises:
        MissingMain: No procedures, or the first one is not `main`
        MalformedOperand: Operand kind does not match the opcode
        JumpOutOfRange: goto/if_icmple target outside its procedure
        UnknownProcedure: call operand outside the procedure list
    """
    if not program.procedures or program.procedures[0].name != "main":
        raise MissingMain("The first procedure must be 'main'")

    for procedure in program.procedures:
        for instr in procedure.instrs:
            _check_operand(instr, procedure, program)


def format_stack_program(program: StackProgram) -> str:
    """Render a program as `.fng` source text, call targets by name."""
    lines: list[str] = []
    for procedure in program.procedures:
        lines.append(f"procedure {procedure.name}")
        for instr in procedure.instrs:
            if instr.opcode is StackOpcode.CALL and type(instr.operand) is int:
                lines.append(f"call {program.procedures[instr.operand].name}")
            else:
                lines.append(str(instr))
    return "\n".join(lines) + "\n"


def stack_instruction_mix(program: StackProgram) -> dict[str, int]:
    """Static per-mnemonic instruction counts."""
    mix = Counter(
        instr.opcode.value for procedure in program.procedures for instr in procedure.instrs
    )
    return dict(sorted(mix.items()))
