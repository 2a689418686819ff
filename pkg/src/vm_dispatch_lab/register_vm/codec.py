"""
Binary `.gnfb` format for register programs.

Layout (all integers little-endian):

    header   "GNFB" | version 0x01 | 3 reserved zero bytes | u32 instruction count
    record   opcode byte | arity byte | 3 x (tag byte | 4-byte payload)

Tags are the operand kinds (0 memory, 1 register, 2 const, 3 label) or 0xFF
for an absent slot, whose payload is zero. Const payloads are signed, all
others unsigned.
"""

import logging
import struct

from ..errors import (
    BadMagic,
    CodecError,
    InvalidOpcode,
    InvalidTag,
    TruncatedRecord,
    UnsupportedVersion,
)
from .program import (
    REGISTER_COUNT,
    SIGNATURES,
    Operand,
    OperandKind,
    RegInstr,
    RegOpcode,
    RegProgram,
)

logger = logging.getLogger(__name__)

MAGIC = b"GNFB"
VERSION = 0x01
ABSENT_TAG = 0xFF

_HEADER = struct.Struct("<4sB3sI")
_RECORD = struct.Struct("<BBBIBIBI")
_SLOTS = 3

HEADER_SIZE = _HEADER.size
RECORD_SIZE = _RECORD.size


def _encode_instr(instr: RegInstr) -> bytes:
    fields: list[int] = [int(instr.opcode), len(instr.operands)]
    for slot in range(_SLOTS):
        if slot < len(instr.operands):
            operand = instr.operands[slot]
            fields += [int(operand.kind), operand.value & 0xFFFFFFFF]
        else:
            fields += [ABSENT_TAG, 0]
    return _RECORD.pack(*fields)


def encode_register_program(program: RegProgram) -> bytes:
    """Serialize a program; the output depends on the instructions only."""
    chunks = [_HEADER.pack(MAGIC, VERSION, bytes(3), len(program.instrs))]
    chunks.extend(_encode_instr(instr) for instr in program.instrs)
    return b"".join(chunks)


def _decode_operand(
    index: int, slot: int, tag: int, payload: int, opcode: RegOpcode, instr_count: int
) -> Operand:
    try:
        kind = OperandKind(tag)
    except ValueError:
        raise InvalidTag(f"Record {index} slot {slot}: unknown tag 0x{tag:02X}") from None
    if kind not in SIGNATURES[opcode][slot]:
        raise InvalidTag(
            f"Record {index} slot {slot}: {kind.name.lower()} not allowed for {opcode.mnemonic}"
        )
    if kind is OperandKind.CONST and payload & 0x80000000:
        payload -= 1 << 32
    elif kind is OperandKind.REGISTER and payload >= REGISTER_COUNT:
        raise InvalidTag(f"Record {index} slot {slot}: register R{payload} does not exist")
    elif kind is OperandKind.LABEL and payload > instr_count:
        raise InvalidTag(f"Record {index} slot {slot}: jump target {payload} past end")
    return Operand(kind, payload)


def _decode_instr(record: tuple[int, ...], index: int, instr_count: int) -> RegInstr:
    code, arity, *slots = record
    if code > 0x0F:
        raise InvalidOpcode(f"Record {index}: opcode byte 0x{code:02X} has high bits set")
    opcode = RegOpcode(code)
    if arity != opcode.arity:
        raise InvalidOpcode(
            f"Record {index}: {opcode.mnemonic} has arity {opcode.arity}, record says {arity}"
        )

    operands = []
    for slot in range(_SLOTS):
        tag, payload = slots[2 * slot], slots[2 * slot + 1]
        if slot < arity:
            operands.append(_decode_operand(index, slot, tag, payload, opcode, instr_count))
        elif tag != ABSENT_TAG or payload != 0:
            raise InvalidTag(f"Record {index} slot {slot}: expected an empty slot")
    return RegInstr(opcode, tuple(operands))


def decode_register_program(data: bytes) -> RegProgram:
    """
    Parse `.gnfb` bytes back into a RegProgram.

    Re-encoding the result reproduces ``data`` byte for byte.

    Raises:
        BadMagic: Data does not start with "GNFB"
        UnsupportedVersion: Unknown version or non-zero reserved bytes
        TruncatedRecord: Header or a record is cut short
        InvalidOpcode: Opcode byte or arity has no instruction mapping
        InvalidTag: Operand tag unknown, misplaced or out of range
        CodecError: Trailing bytes after the last record
    """
    if data[:4] != MAGIC:
        raise BadMagic(f"Expected magic {MAGIC!r}, got {bytes(data[:4])!r}")
    if len(data) < HEADER_SIZE:
        raise TruncatedRecord(f"Header needs {HEADER_SIZE} bytes, got {len(data)}")

    _, version, reserved, count = _HEADER.unpack_from(data, 0)
    if version != VERSION:
        raise UnsupportedVersion(f"Version 0x{version:02X} not supported")
    if reserved != bytes(3):
        raise UnsupportedVersion("Reserved header bytes must be zero")

    expected = HEADER_SIZE + count * RECORD_SIZE
    if len(data) < expected:
        complete = (len(data) - HEADER_SIZE) // RECORD_SIZE
        raise TruncatedRecord(
            f"Record {complete} is truncated: {count} records need {expected} bytes, "
            f"got {len(data)}"
        )
    if len(data) > expected:
        raise CodecError(f"{len(data) - expected} trailing byte(s) after {count} records")

    instrs = tuple(
        _decode_instr(record, index, count)
        for index, record in enumerate(_RECORD.iter_unpack(data[HEADER_SIZE:]))
    )
    logger.debug(f"Decoded register program: {count} instruction(s)")
    return RegProgram(instrs=instrs)
