"""
Tagged runtime values of the stack machine.

Inside the interpreter a value is held as the matching Python object
(int, float, single-character str, bool) and its tag is the object's exact
type; ``Value`` is the boundary form handed to and returned from callers.
Int arithmetic wraps modulo 2**32.
"""

from dataclasses import dataclass
from enum import StrEnum

INT32_MIN = -(1 << 31)
INT32_MAX = (1 << 31) - 1


def wrap_int32(value: int) -> int:
    """Wrap an integer into the signed 32-bit range."""
    return ((value + 0x80000000) & 0xFFFFFFFF) - 0x80000000


def trunc_div(dividend: int, divisor: int) -> int:
    """Integer division truncating toward zero (caller rejects divisor 0)."""
    quotient = abs(dividend) // abs(divisor)
    return -quotient if (dividend < 0) != (divisor < 0) else quotient


class ValueTag(StrEnum):
    INT = "int"
    FLOAT = "float"
    CHAR = "char"
    BOOL = "bool"


_TAG_OF_TYPE: dict[type, ValueTag] = {
    int: ValueTag.INT,
    float: ValueTag.FLOAT,
    str: ValueTag.CHAR,
    bool: ValueTag.BOOL,
}


def tag_of(native: object) -> ValueTag:
    """Tag of an interpreter-level value."""
    try:
        return _TAG_OF_TYPE[type(native)]
    except KeyError:
        raise TypeError(f"{type(native).__name__} is not a stack machine value") from None


def render(native: object) -> str:
    """Textual form written by `print`."""
    if type(native) is bool:
        return "true" if native else "false"
    if type(native) is float:
        return repr(native)
    return str(native)


@dataclass(frozen=True, slots=True)
class Value:
    """A tagged stack machine datum."""

    tag: ValueTag
    payload: int | float | str | bool

    def __post_init__(self):
        expected = {
            ValueTag.INT: int,
            ValueTag.FLOAT: float,
            ValueTag.CHAR: str,
            ValueTag.BOOL: bool,
        }[self.tag]
        if type(self.payload) is not expected:
            raise TypeError(f"{self.tag} value needs a {expected.__name__} payload")
        if self.tag is ValueTag.INT and not INT32_MIN <= self.payload <= INT32_MAX:  # type: ignore[operator]
            raise ValueError(f"Int payload {self.payload} outside 32-bit range")
        if self.tag is ValueTag.CHAR and len(self.payload) != 1:  # type: ignore[arg-type]
            raise ValueError(f"Char payload must be one character, got {self.payload!r}")

    @classmethod
    def integer(cls, value: int) -> "Value":
        return cls(ValueTag.INT, value)

    @classmethod
    def floating(cls, value: float) -> "Value":
        return cls(ValueTag.FLOAT, float(value))

    @classmethod
    def char(cls, value: str) -> "Value":
        return cls(ValueTag.CHAR, value)

    @classmethod
    def boolean(cls, value: bool | int) -> "Value":
        if value not in (0, 1):
            raise ValueError(f"Bool payload must be 0 or 1, got {value!r}")
        return cls(ValueTag.BOOL, bool(value))

    @classmethod
    def from_native(cls, native: int | float | str | bool) -> "Value":
        return cls(tag_of(native), native)

    @property
    def native(self) -> int | float | str | bool:
        return self.payload

    def render(self) -> str:
        return render(self.payload)
