"""
Exception hierarchy for vm-dispatch-lab.

Every failure raised by the assemblers, the codec, the two interpreters and
the benchmark harness derives from VMLabError, grouped into families the CLI
maps onto exit codes:

- AssemblyError: source text could not be assembled (exit code 2)
- CodecError: a binary register program could not be decoded (exit code 2)
- VMRuntimeError: execution halted on a runtime fault (exit code 1)
- HarnessError: benchmark bookkeeping failed
"""


class VMLabError(Exception):
    """Root of all vm-dispatch-lab errors."""


# ============================================================================
# Assembly errors
# ============================================================================


class AssemblyError(VMLabError):
    """Source text could not be assembled."""

    def __init__(self, message: str, line_number: int | None = None):
        self.line_number = line_number
        self.detail = message
        prefix = f"line {line_number}: " if line_number is not None else ""
        super().__init__(f"{prefix}{message}")


class UnknownInstruction(AssemblyError):
    """Mnemonic is not part of the instruction set."""


class UnknownProcedure(AssemblyError):
    """`call` names a procedure that was never declared."""


class MalformedOperand(AssemblyError):
    """Operand token cannot be parsed, or is missing/extra for the opcode."""


class MissingMain(AssemblyError):
    """First procedure of a stack program is not `main` (or there is none)."""


class JumpOutOfRange(AssemblyError):
    """Jump target lies outside the enclosing procedure."""


class UnknownLabel(AssemblyError):
    """`P <N>` refers to a label that is never declared."""


class DuplicateLabel(AssemblyError):
    """The same label number is declared twice."""


class ArityMismatch(AssemblyError):
    """Wrong number of operands for a register opcode."""


class BadOperandKind(AssemblyError):
    """Operand kind not allowed in this slot (e.g. a constant destination)."""


class AddressOutOfRange(AssemblyError):
    """Register index or memory address outside the machine."""


# ============================================================================
# Codec errors
# ============================================================================


class CodecError(VMLabError):
    """Binary register program could not be decoded."""


class BadMagic(CodecError):
    """Container does not start with the expected magic bytes."""


class UnsupportedVersion(CodecError):
    """Container version is not understood by this decoder."""


class TruncatedRecord(CodecError):
    """Byte sequence ends inside the header or an instruction record."""


class InvalidOpcode(CodecError):
    """Opcode byte has no mapping, or disagrees with the recorded arity."""


class InvalidTag(CodecError):
    """Operand slot tag is unknown or misplaced."""


# ============================================================================
# Runtime errors
# ============================================================================


class VMRuntimeError(VMLabError):
    """Execution halted on a runtime fault.

    The interpreter loop annotates the error with where it happened:
    ``procedure``/``line`` for the stack machine, ``pc`` for the register machine.
    """

    def __init__(self, message: str):
        self.detail = message
        self.procedure: str | None = None
        self.line: int | None = None
        self.pc: int | None = None
        super().__init__(message)

    def annotate(
        self, *, procedure: str | None = None, line: int | None = None, pc: int | None = None
    ) -> "VMRuntimeError":
        """Attach the location of the faulting instruction (first annotation wins)."""
        if self.procedure is None and self.line is None and self.pc is None:
            self.procedure = procedure
            self.line = line
            self.pc = pc
        return self

    def __str__(self) -> str:
        if self.procedure is not None:
            return f"{self.detail} (procedure {self.procedure}, line {self.line})"
        if self.pc is not None:
            return f"{self.detail} (pc {self.pc})"
        return self.detail


class StackUnderflow(VMRuntimeError):
    """Pop from an empty operand stack."""


class StackOverflow(VMRuntimeError):
    """Push beyond the configured stack capacity."""


class TypeMismatch(VMRuntimeError):
    """Operand tag check failed."""


class DivisionByZero(VMRuntimeError):
    """Integer or floating-point division by zero."""


class CallDepthExceeded(VMRuntimeError):
    """Procedure nesting exceeded the configured maximum depth."""


# ============================================================================
# Harness errors
# ============================================================================


class HarnessError(VMLabError):
    """Benchmark harness bookkeeping failed."""


class UnknownCase(HarnessError):
    """Benchmark name or VM kind is not part of the corpus."""


class CountInstabilityError(HarnessError):
    """Two repetitions of the same case disagreed on their counts."""


class IncompleteResults(HarnessError):
    """A comparison report was requested without both VMs for every benchmark."""


class ClockUnavailable(HarnessError):
    """The per-process CPU clock cannot be read on this platform."""
