"""
Register machine program representation.

Instructions are written operator-first with up to three operands. Operand
kinds keep the numeric type codes of the binary format (0 memory,
1 register, 2 constant) plus 3 for resolved jump labels.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import IntEnum

from ..errors import AddressOutOfRange, ArityMismatch, BadOperandKind, UnknownLabel

logger = logging.getLogger(__name__)

REGISTER_COUNT = 4
INT32_MIN = -(1 << 31)
INT32_MAX = (1 << 31) - 1


class RegOpcode(IntEnum):
    """Register machine instruction set with its binary opcode numbers."""

    ADD = 0x0
    DIV = 0x1
    MUL = 0x2
    LTN = 0x3
    EQL = 0x4
    AND = 0x5
    NOT = 0x6
    OR = 0x7
    INC = 0x8
    DEC = 0x9
    PRINT = 0xA
    LOAD = 0xB
    GOTO = 0xC
    IF = 0xD
    RETURN = 0xE
    CALL = 0xF

    @property
    def mnemonic(self) -> str:
        return self.name.lower()

    @property
    def arity(self) -> int:
        return len(SIGNATURES[self])


class OperandKind(IntEnum):
    MEMORY = 0
    REGISTER = 1
    CONST = 2
    LABEL = 3


_DEST = frozenset({OperandKind.MEMORY, OperandKind.REGISTER})
_SRC = frozenset({OperandKind.MEMORY, OperandKind.REGISTER, OperandKind.CONST})
_TARGET = frozenset({OperandKind.LABEL})

# Allowed operand kinds per slot
SIGNATURES: dict[RegOpcode, tuple[frozenset[OperandKind], ...]] = {
    RegOpcode.ADD: (_DEST, _SRC, _SRC),
    RegOpcode.DIV: (_DEST, _SRC, _SRC),
    RegOpcode.MUL: (_DEST, _SRC, _SRC),
    RegOpcode.LTN: (_DEST, _SRC, _SRC),
    RegOpcode.EQL: (_DEST, _SRC, _SRC),
    RegOpcode.AND: (_DEST, _SRC, _SRC),
    RegOpcode.OR: (_DEST, _SRC, _SRC),
    RegOpcode.NOT: (_DEST, _SRC),
    RegOpcode.LOAD: (_DEST, _SRC),
    RegOpcode.IF: (_DEST, _TARGET),
    RegOpcode.INC: (_DEST,),
    RegOpcode.DEC: (_DEST,),
    RegOpcode.PRINT: (_SRC,),
    RegOpcode.GOTO: (_TARGET,),
    RegOpcode.CALL: (_TARGET,),
    RegOpcode.RETURN: (),
}


@dataclass(frozen=True, slots=True)
class Operand:
    """A typed operand: memory address, register index, constant or label target."""

    kind: OperandKind
    value: int

    @classmethod
    def memory(cls, address: int) -> "Operand":
        return cls(OperandKind.MEMORY, address)

    @classmethod
    def register(cls, index: int) -> "Operand":
        return cls(OperandKind.REGISTER, index)

    @classmethod
    def const(cls, value: int) -> "Operand":
        return cls(OperandKind.CONST, value)

    @classmethod
    def label(cls, target: int) -> "Operand":
        return cls(OperandKind.LABEL, target)

    def render(self, labels: dict[int, int] | None = None) -> str:
        if self.kind is OperandKind.MEMORY:
            return f"@{self.value}"
        if self.kind is OperandKind.REGISTER:
            return f"R{self.value}"
        if self.kind is OperandKind.CONST:
            return f"#{self.value}"
        return f"P{labels[self.value] if labels else self.value}"


@dataclass(frozen=True, slots=True)
class RegInstr:
    opcode: RegOpcode
    operands: tuple[Operand, ...] = ()


@dataclass(frozen=True, slots=True)
class RegProgram:
    """
    Flat instruction list.

    ``label_table`` maps source label numbers to instruction indices; it is
    kept for diagnostics only and does not take part in equality.
    """

    instrs: tuple[RegInstr, ...]
    label_table: dict[int, int] = field(default_factory=dict, compare=False, hash=False)

    def __len__(self) -> int:
        return len(self.instrs)


def check_instruction(
    instr: RegInstr,
    instr_count: int,
    memory_size: int,
    line_number: int | None = None,
) -> None:
    """
    Check arity, operand kinds and ranges of one instruction.

    Raises:
        ArityMismatch: Wrong operand count
        BadOperandKind: Operand kind not allowed in its slot
        AddressOutOfRange: Register or memory address outside the machine
        UnknownLabel: Label target outside [0, instr_count]
    """
    signature = SIGNATURES[instr.opcode]
    mnemonic = instr.opcode.mnemonic
    if len(instr.operands) != len(signature):
        raise ArityMismatch(
            f"'{mnemonic}' takes {len(signature)} operand(s), got {len(instr.operands)}",
            line_number,
        )

    for slot, (operand, allowed) in enumerate(zip(instr.operands, signature, strict=True)):
        if operand.kind not in allowed:
            raise BadOperandKind(
                f"'{mnemonic}' operand {slot + 1} cannot be a {operand.kind.name.lower()}",
                line_number,
            )
        if operand.kind is OperandKind.REGISTER and not 0 <= operand.value < REGISTER_COUNT:
            raise AddressOutOfRange(f"Register R{operand.value} does not exist", line_number)
        if operand.kind is OperandKind.MEMORY and not 0 <= operand.value < memory_size:
            raise AddressOutOfRange(
                f"Memory address @{operand.value} outside [0, {memory_size})", line_number
            )
        if operand.kind is OperandKind.CONST and not INT32_MIN <= operand.value <= INT32_MAX:
            raise BadOperandKind(f"Constant #{operand.value} outside 32-bit range", line_number)
        if operand.kind is OperandKind.LABEL and not 0 <= operand.value <= instr_count:
            raise UnknownLabel(
                f"Jump target {operand.value} outside [0, {instr_count}]", line_number
            )


def validate_register_program(program: RegProgram, memory_size: int = 65536) -> None:
    """Re-check every instruction of a (possibly hand-built or decoded) program."""
    for instr in program.instrs:
        check_instruction(instr, len(program.instrs), memory_size)


def disassemble_register_program(program: RegProgram) -> str:
    """
    Render a program as `.gnf` source text.

    Labels are numbered 1..k in ascending target order; re-assembling the
    text yields an equal program.
    """
    targets = sorted(
        {
            operand.value
            for instr in program.instrs
            for operand in instr.operands
            if operand.kind is OperandKind.LABEL
        }
    )
    labels = {target: number for number, target in enumerate(targets, start=1)}

    lines: list[str] = []
    for index, instr in enumerate(program.instrs):
        if index in labels:
            lines.append(f"{labels[index]}:")
        rendered = " ".join(operand.render(labels) for operand in instr.operands)
        lines.append(f"{instr.opcode.mnemonic} {rendered}".rstrip())
    if len(program.instrs) in labels:
        lines.append(f"{labels[len(program.instrs)]}:")
    return "\n".join(lines) + "\n"


def register_instruction_mix(program: RegProgram) -> dict[str, int]:
    """Static per-mnemonic instruction counts."""
    mix = Counter(instr.opcode.mnemonic for instr in program.instrs)
    return dict(sorted(mix.items()))
