"""
Integration tests: run the embedded corpus on both machines.

Measured dispatch counts must equal the oracle exactly. The two
multi-million-instruction benchmarks are marked slow.
"""

import pytest

from vm_dispatch_lab.bench import CASE_NAMES, expected_dispatches, get_case, run_case, run_suite
from vm_dispatch_lab.config import BenchConfig, RegExecConfig, StackExecConfig
from vm_dispatch_lab.register_vm import execute_register, parse_register_source
from vm_dispatch_lab.stack_vm import execute_stack, parse_stack_source

pytestmark = pytest.mark.integration

COUNTS_ONLY = BenchConfig(repetitions=1, warmup=0, fine_timing=False)


def run_counts(name: str, vm: str) -> int:
    return run_case(get_case(name, vm), COUNTS_ONLY).dispatch_count


class TestFastCorpus:
    """Fibonacci and Recursion on both machines."""

    @pytest.mark.parametrize("name", ["Fibonacci", "Recursion"])
    @pytest.mark.parametrize("vm", ["stack", "register"])
    def test_matches_oracle(self, name, vm):
        """Test measured dispatches equal the oracle."""
        assert run_counts(name, vm) == expected_dispatches((name, vm))

    @pytest.mark.parametrize("name", ["Fibonacci", "Recursion"])
    def test_fine_timing_phases_within_execution(self, name):
        """Test fetch and dispatch time fit inside execution time."""
        config = BenchConfig(repetitions=3, warmup=1, fine_timing=True)
        for vm in ("stack", "register"):
            metrics = run_case(get_case(name, vm), config)
            assert metrics.fetch_time_us > 0.0
            assert metrics.dispatch_time_us > 0.0
            assert metrics.fetch_time_us + metrics.dispatch_time_us <= 1.05 * metrics.exec_time_us

    def test_counts_identical_with_and_without_timing(self):
        """Test the timing mode never changes counts."""
        stack = parse_stack_source(get_case("Fibonacci", "stack").source)
        register = parse_register_source(get_case("Fibonacci", "register").source)
        timed = execute_stack(stack, StackExecConfig(fine_timing=True))
        counted = execute_stack(stack, StackExecConfig(fine_timing=False))
        assert timed.metrics.counts == counted.metrics.counts
        assert timed.output == counted.output
        timed = execute_register(register, RegExecConfig(fine_timing=True))
        counted = execute_register(register, RegExecConfig(fine_timing=False))
        assert timed.metrics.counts == counted.metrics.counts
        assert timed.output == counted.output

    def test_sessions_repeatable(self):
        """Test two counts-only sessions give identical results."""
        first = run_suite(("Fibonacci",), COUNTS_ONLY)
        second = run_suite(("Fibonacci",), COUNTS_ONLY)
        assert {k: m.counts for k, m in first.results.items()} == {
            k: m.counts for k, m in second.results.items()
        }


@pytest.mark.slow
class TestSlowCorpus:
    """AddictiveAddition and ExhaustiveCollatz, the multi-million-dispatch loops."""

    @pytest.mark.parametrize("name", ["AddictiveAddition", "ExhaustiveCollatz"])
    @pytest.mark.parametrize("vm", ["stack", "register"])
    def test_matches_oracle(self, name, vm):
        """Test measured dispatches equal the oracle."""
        assert run_counts(name, vm) == expected_dispatches((name, vm))

    @pytest.mark.parametrize("name", ["AddictiveAddition", "ExhaustiveCollatz"])
    @pytest.mark.parametrize("vm", ["stack", "register"])
    def test_fine_timing_phases_within_execution(self, name, vm):
        """Test fetch and dispatch time fit inside execution time on the long loops."""
        config = BenchConfig(repetitions=1, warmup=0, fine_timing=True)
        metrics = run_case(get_case(name, vm), config)
        assert metrics.dispatch_count == expected_dispatches((name, vm))
        assert metrics.fetch_time_us > 0.0
        assert metrics.dispatch_time_us > 0.0
        assert metrics.fetch_time_us + metrics.dispatch_time_us <= 1.05 * metrics.exec_time_us

    def test_full_suite_register_saves_dispatches(self):
        """Test the register machine dispatches less for every benchmark."""
        report = run_suite(CASE_NAMES, COUNTS_ONLY)
        assert report.all_match
        for name in CASE_NAMES:
            stack = report.results[(name, "stack")].dispatch_count
            register = report.results[(name, "register")].dispatch_count
            assert register < stack
