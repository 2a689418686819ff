"""
Shared pytest fixtures for vm-dispatch-lab tests.

Provides counts-only interpreter configs, scripted CPU clocks and the
assembled corpus programs used throughout the test suite.
"""

import itertools

import pytest

from vm_dispatch_lab.bench import get_case
from vm_dispatch_lab.config import LabConfig, RegExecConfig, StackExecConfig
from vm_dispatch_lab.instrumentation import CpuClock
from vm_dispatch_lab.register_vm import parse_register_source
from vm_dispatch_lab.stack_vm import parse_stack_source


@pytest.fixture
def stack_config():
    """Stack interpreter config without per-instruction clocks."""
    return StackExecConfig(fine_timing=False)


@pytest.fixture
def register_config():
    """Register interpreter config without per-instruction clocks."""
    return RegExecConfig(fine_timing=False)


@pytest.fixture
def counts_only_lab():
    """Full lab config in counts-only mode."""
    return LabConfig().with_fine_timing(False)


@pytest.fixture
def ticking_clock():
    """Clock advancing one microsecond per read."""
    return CpuClock(read=itertools.count().__next__, resolution_ticks_per_second=1_000_000)


@pytest.fixture
def scripted_clock():
    """Factory for a clock returning the given readings (microsecond ticks) in order."""

    def build(*readings: int) -> CpuClock:
        return CpuClock(read=iter(readings).__next__, resolution_ticks_per_second=1_000_000)

    return build


@pytest.fixture
def fibonacci_stack():
    return parse_stack_source(get_case("Fibonacci", "stack").source)


@pytest.fixture
def fibonacci_register():
    return parse_register_source(get_case("Fibonacci", "register").source)


@pytest.fixture
def recursion_stack():
    return parse_stack_source(get_case("Recursion", "stack").source)


@pytest.fixture
def recursion_register():
    return parse_register_source(get_case("Recursion", "register").source)
