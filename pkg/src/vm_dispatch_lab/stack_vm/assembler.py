"""
Two-phase assembler for `.fng` stack machine source.

Phase 1 collects the `procedure <name>` headers in order so that calls can
be resolved to procedure indices regardless of declaration order. Phase 2
parses instructions, resolving `call <name>` to the procedure's index and
checking jump targets against the enclosing procedure. Line 0 of a procedure
is the first instruction after its header.

Source format:
    - whitespace-separated tokens, one instruction per line
    - `;` starts a comment running to the end of the line
    - blank lines are ignored
    - integer operands are plain decimal with an optional leading `-`
    - a char operand is bare (`a`) or quoted (`'a'`); quoted chars accept
      `\s` (space), `\t`, `\n`, `\\` and `\xHH` for any other code point,
      which is how `;` is written
"""

import logging
import re

from ..errors import (
    AssemblyError,
    JumpOutOfRange,
    MalformedOperand,
    MissingMain,
    UnknownInstruction,
    UnknownProcedure,
)
from .program import (
    CHAR_ESCAPES,
    ProcedureDef,
    StackInstr,
    StackOpcode,
    StackOperandKind,
    StackProgram,
)
from .values import INT32_MAX, INT32_MIN, Value

logger = logging.getLogger(__name__)

_MNEMONICS = {op.value: op for op in StackOpcode}
_DECIMAL = re.compile(r"-?[0-9]+")
_HEX_ESCAPE = re.compile(r"\\x([0-9a-fA-F]{1,6})")


def _tokenize(text: str) -> list[tuple[int, list[str]]]:
    """Return (1-based line number, tokens) for every non-empty source line."""
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split(";", 1)[0].split()
        if tokens:
            lines.append((number, tokens))
    return lines


def _parse_decimal(token: str) -> int:
    if not _DECIMAL.fullmatch(token):
        raise ValueError(token)
    return int(token)


def _parse_char(token: str) -> str:
    if len(token) == 1:
        return token
    if len(token) < 3 or token[0] != "'" or token[-1] != "'":
        raise ValueError(token)
    body = token[1:-1]
    if len(body) == 1:
        return body
    if body in CHAR_ESCAPES:
        return CHAR_ESCAPES[body]
    match = _HEX_ESCAPE.fullmatch(body)
    if match is None:
        raise ValueError(token)
    return chr(int(match.group(1), 16))


def _parse_literal(kind: StackOperandKind, token: str, line_number: int) -> Value:
    try:
        if kind is StackOperandKind.INT:
            value = _parse_decimal(token)
            if not INT32_MIN <= value <= INT32_MAX:
                raise MalformedOperand(f"Int literal {token} outside 32-bit range", line_number)
            return Value.integer(value)
        if kind is StackOperandKind.FLOAT:
            if "_" in token:
                raise ValueError(token)
            return Value.floating(float(token))
        if kind is StackOperandKind.BOOL:
            lowered = token.lower()
            if lowered in ("1", "true"):
                return Value.boolean(True)
            if lowered in ("0", "false"):
                return Value.boolean(False)
            raise ValueError(token)
        return Value.char(_parse_char(token))
    except ValueError:
        raise MalformedOperand(
            f"'{token}' is not a valid {kind.value} literal", line_number
        ) from None


def parse_stack_source(text: str) -> StackProgram:
    """
    Assemble `.fng` source text into a StackProgram.

    Args:
        text: Source text

    Returns:
        StackProgram whose first procedure is `main`

    Raises:
        UnknownInstruction: Mnemonic not in the instruction set
        UnknownProcedure: `call` target never declared
        MalformedOperand: Missing, extra or unparseable operand
        MissingMain: No procedure, code before the first header, or first is not `main`
        JumpOutOfRange: Jump target outside the enclosing procedure
    """
    lines = _tokenize(text)

    # Phase 1: procedure headers
    procedure_names: dict[str, int] = {}
    for number, tokens in lines:
        if tokens[0] != "procedure":
            continue
        if len(tokens) != 2:
            raise MalformedOperand("'procedure' takes exactly one name", number)
        name = tokens[1]
        if name in procedure_names:
            raise AssemblyError(f"Procedure '{name}' declared twice", number)
        procedure_names[name] = len(procedure_names)

    if not procedure_names:
        raise MissingMain("Program declares no procedures")
    if next(iter(procedure_names)) != "main":
        raise MissingMain("The first procedure must be 'main'", lines[0][0])

    # Phase 2: instructions
    bodies: list[tuple[str, list[StackInstr], list[tuple[int, int]]]] = []
    for number, tokens in lines:
        mnemonic = tokens[0]
        if mnemonic == "procedure":
            bodies.append((tokens[1], [], []))
            continue
        if not bodies:
            raise MissingMain("Instruction before the first procedure header", number)

        opcode = _MNEMONICS.get(mnemonic)
        if opcode is None:
            raise UnknownInstruction(f"Unknown instruction '{mnemonic}'", number)

        operands = tokens[1:]
        if len(operands) != opcode.arity:
            raise MalformedOperand(
                f"'{mnemonic}' takes {opcode.arity} operand(s), got {len(operands)}", number
            )

        _, instrs, jumps = bodies[-1]
        kind = opcode.operand_kind
        operand: Value | int | None = None
        if kind is StackOperandKind.PROCEDURE:
            if operands[0] not in procedure_names:
                raise UnknownProcedure(f"Call to undeclared procedure '{operands[0]}'", number)
            operand = procedure_names[operands[0]]
        elif kind is StackOperandKind.LINE:
            try:
                operand = _parse_decimal(operands[0])
            except ValueError:
                raise MalformedOperand(
                    f"'{operands[0]}' is not a line number", number
                ) from None
            jumps.append((number, operand))
        elif kind is not StackOperandKind.NONE:
            operand = _parse_literal(kind, operands[0], number)

        instrs.append(StackInstr(opcode, operand))

    procedures = []
    for name, instrs, jumps in bodies:
        for number, target in jumps:
            if not 0 <= target < len(instrs):
                raise JumpOutOfRange(
                    f"Jump target {target} outside procedure '{name}' (0..{len(instrs) - 1})",
                    number,
                )
        procedures.append(ProcedureDef(name=name, instrs=tuple(instrs)))

    program = StackProgram(procedures=tuple(procedures))
    logger.debug(
        f"Assembled stack program: {len(procedures)} procedure(s), "
        f"{program.instruction_count} instruction(s)"
    )
    return program
