"""
Embedded benchmark corpus.

Four benchmark programs, each written once for the stack machine (`.fng`)
and once for the register machine (`.gnf`). The listings are kept verbatim;
the dispatch counts they produce depend on every instruction.
"""

from dataclasses import dataclass
from typing import Literal

from ..errors import UnknownCase

VMKind = Literal["stack", "register"]

CASE_NAMES: tuple[str, ...] = ("Fibonacci", "ExhaustiveCollatz", "AddictiveAddition", "Recursion")
VM_KINDS: tuple[VMKind, ...] = ("stack", "register")


@dataclass(frozen=True, slots=True)
class BenchmarkCase:
    """One corpus program for one machine."""

    name: str
    vm: VMKind
    source: str

    @property
    def key(self) -> tuple[str, VMKind]:
        return (self.name, self.vm)

    @property
    def filename(self) -> str:
        extension = "fng" if self.vm == "stack" else "gnf"
        return f"{self.name}_{self.vm}.{extension}"


FIBONACCI_STACK = """\
procedure main
iconst 0
gstore
iconst 1
gstore
iconst 0
dup
iconst 1000
swap
ilt
if_icmple 20
inc
gload
gload
swap
dup
gstore
iadd
gstore
goto 5
gload
print
ret
"""

FIBONACCI_REGISTER = """\
load R1 #0
load R2 #500
load @0 #0
load @1 #1
1:
ltn R0 R1 R2
if R0 P2
add @0 @0 @1
add @1 @0 @1
inc R1
goto P1
2:
print @1
return
"""

ADDICTIVE_ADDITION_STACK = """\
procedure main
iconst 0
dup
iconst 5000000
igt
if_icmple 7
inc
goto 1
ret
"""

ADDICTIVE_ADDITION_REGISTER = """\
load R1 #0
load R2 #5000000
1:
ltn R0 R1 R2
if r0 P2
inc R1
goto P1
2:
return
"""

EXHAUSTIVE_COLLATZ_STACK = """\
procedure main
iconst 1
dup
iconst 20000
swap
ilt
if_icmple 31
dup
dup
iconst 1
ieq
ne
if_icmple 28
dup
iconst 1
and
dup
if_icmple 22
swap
iconst 3
imul
inc
swap
ne
if_icmple 27
iconst 2
swap
idiv
goto 7
pop
inc
goto 1
ret
"""

EXHAUSTIVE_COLLATZ_REGISTER = """\
load R1 #1
1:
ltn R0 R1 #20000
if R0 P2
load @1 R1
3:
eql R2 @1 #1
not R2 R2
if R2 P4
and R3 @1 #1
eql R3 R3 #1
if R3 P5
mul @1 @1 #3
inc @1
5:
not R3 R3
if R3 P6
div @1 @1 #2
6:
goto P3
4:
inc R1
goto P1
2:
return
"""

RECURSION_STACK = """\
procedure main
iconst 1000
gstore
call rec
ret
procedure rec
gload
dup
iconst 0
ieq
if_icmple 6
ter
dec
gstore
call rec
ret
"""

RECURSION_REGISTER = """\
load R1 #0
load R2 #1000
call P1
print R2
return
1:
2:
ltn R0 R1 R2
if R0 P3
dec R2
call P2
3:
return
"""

_SOURCES: dict[tuple[str, VMKind], str] = {
    ("Fibonacci", "stack"): FIBONACCI_STACK,
    ("Fibonacci", "register"): FIBONACCI_REGISTER,
    ("ExhaustiveCollatz", "stack"): EXHAUSTIVE_COLLATZ_STACK,
    ("ExhaustiveCollatz", "register"): EXHAUSTIVE_COLLATZ_REGISTER,
    ("AddictiveAddition", "stack"): ADDICTIVE_ADDITION_STACK,
    ("AddictiveAddition", "register"): ADDICTIVE_ADDITION_REGISTER,
    ("Recursion", "stack"): RECURSION_STACK,
    ("Recursion", "register"): RECURSION_REGISTER,
}

CORPUS: tuple[BenchmarkCase, ...] = tuple(
    BenchmarkCase(name, vm, _SOURCES[(name, vm)]) for name in CASE_NAMES for vm in VM_KINDS
)


def canonical_name(name: str) -> str:
    """Match a benchmark name case-insensitively; raises UnknownCase."""
    for known in CASE_NAMES:
        if known.lower() == name.lower():
            return known
    raise UnknownCase(f"Unknown benchmark '{name}' (expected one of {', '.join(CASE_NAMES)})")


def get_case(name: str, vm: str) -> BenchmarkCase:
    """Look up one corpus entry by benchmark name and machine."""
    canonical = canonical_name(name)
    if vm not in VM_KINDS:
        raise UnknownCase(f"Unknown machine '{vm}' (expected stack or register)")
    return BenchmarkCase(canonical, vm, _SOURCES[(canonical, vm)])  # type: ignore[arg-type]


def resolve_suite(suite: str) -> tuple[str, ...]:
    """Benchmark names selected by a `--suite` value (`all` or one name)."""
    if suite.lower() == "all":
        return CASE_NAMES
    return (canonical_name(suite),)


def suite_cases(names: tuple[str, ...]) -> tuple[BenchmarkCase, ...]:
    return tuple(case for case in CORPUS if case.name in names)
