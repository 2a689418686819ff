"""
Two-phase assembler for `.gnf` register machine source.

Phase 1 walks the source recording, for every `N:` label line, the index of
the next instruction. Adjacent label lines share one index and a label after
the last instruction resolves to the instruction count. Phase 2 parses the
instructions, checks them and replaces every `P N` with an absolute index.

Operand syntax:
    @N      memory address N
    RN, rN  register N (0..3)
    #N      signed 32-bit constant
    PN, P N jump label N
"""

import logging

from ..errors import (
    DuplicateLabel,
    MalformedOperand,
    UnknownInstruction,
    UnknownLabel,
)
from .program import (
    Operand,
    OperandKind,
    RegInstr,
    RegOpcode,
    RegProgram,
    check_instruction,
)

logger = logging.getLogger(__name__)

_MNEMONICS = {op.mnemonic: op for op in RegOpcode}


def _label_number(token: str, line_number: int) -> int:
    try:
        number = int(token, 10)
    except ValueError:
        raise MalformedOperand(f"'{token}' is not a label number", line_number) from None
    if number < 0:
        raise MalformedOperand(f"Label number {number} is negative", line_number)
    return number


def _split_label(tokens: list[str], line_number: int) -> tuple[int | None, list[str]]:
    """Strip a leading `N:` declaration; return (label or None, remaining tokens)."""
    head = tokens[0]
    if not head.endswith(":"):
        return None, tokens
    return _label_number(head[:-1], line_number), tokens[1:]


def _tokenize(text: str) -> list[tuple[int, int | None, list[str]]]:
    """Return (line number, declared label, instruction tokens) per non-empty line."""
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split(";", 1)[0].split()
        if not tokens:
            continue
        label, rest = _split_label(tokens, number)
        lines.append((number, label, rest))
    return lines


def _group_operands(tokens: list[str]) -> list[str]:
    """Join a bare `P` with the label number following it."""
    grouped: list[str] = []
    index = 0
    while index < len(tokens):
        token = tokens[index]
        if token.upper() == "P" and index + 1 < len(tokens):
            grouped.append("P" + tokens[index + 1])
            index += 2
            continue
        grouped.append(token)
        index += 1
    return grouped


def _parse_operand(token: str, labels: dict[int, int], line_number: int) -> Operand:
    prefix, body = token[0].upper(), token[1:]
    try:
        if prefix == "@":
            address = int(body, 10)
            if address < 0:
                raise ValueError(body)
            return Operand.memory(address)
        if prefix == "R":
            return Operand.register(int(body, 10))
        if prefix == "#":
            return Operand.const(int(body, 10))
    except ValueError:
        raise MalformedOperand(f"Malformed operand '{token}'", line_number) from None

    if prefix == "P":
        label = _label_number(body, line_number)
        if label not in labels:
            raise UnknownLabel(f"Label {label} is never declared", line_number)
        return Operand(OperandKind.LABEL, labels[label])

    raise MalformedOperand(f"Malformed operand '{token}'", line_number)


def parse_register_source(text: str, memory_size: int = 65536) -> RegProgram:
    """
    Assemble `.gnf` source text into a RegProgram.

    Args:
        text: Source text
        memory_size: Memory cells of the target machine, for address checks

    Returns:
        RegProgram with labels resolved to instruction indices

    Raises:
        UnknownInstruction: Mnemonic not in the instruction set
        UnknownLabel: `P N` with no `N:` declaration
        DuplicateLabel: Label number declared twice
        ArityMismatch: Wrong operand count
        BadOperandKind: Operand kind not allowed in its slot
        AddressOutOfRange: Register or memory address outside the machine
        MalformedOperand: Unparseable operand token
    """
    lines = _tokenize(text)

    # Phase 1: label positions
    labels: dict[int, int] = {}
    index = 0
    for number, label, tokens in lines:
        if label is not None:
            if label in labels:
                raise DuplicateLabel(f"Label {label} declared twice", number)
            labels[label] = index
        if tokens:
            index += 1
    instr_count = index

    # Phase 2: instructions
    instrs: list[RegInstr] = []
    for number, _, tokens in lines:
        if not tokens:
            continue
        opcode = _MNEMONICS.get(tokens[0].lower())
        if opcode is None:
            raise UnknownInstruction(f"Unknown instruction '{tokens[0]}'", number)
        operands = tuple(
            _parse_operand(token, labels, number) for token in _group_operands(tokens[1:])
        )
        instr = RegInstr(opcode, operands)
        check_instruction(instr, instr_count, memory_size, number)
        instrs.append(instr)

    program = RegProgram(instrs=tuple(instrs), label_table=labels)
    logger.debug(
        f"Assembled register program: {len(instrs)} instruction(s), {len(labels)} label(s)"
    )
    return program
