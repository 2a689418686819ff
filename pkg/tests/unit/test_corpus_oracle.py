"""
Tests for the embedded corpus, the dispatch-count oracle and the published figures.
"""

import pytest

from vm_dispatch_lab.bench import (
    CASE_NAMES,
    CORPUS,
    PUBLISHED,
    collatz_step_counts,
    expected_dispatches,
    get_case,
    published_dispatches,
    resolve_suite,
)
from vm_dispatch_lab.bench.corpus import canonical_name, suite_cases
from vm_dispatch_lab.bench.oracle import COLLATZ_REGISTER_COSTS, COLLATZ_STACK_COSTS
from vm_dispatch_lab.errors import UnknownCase


class TestCorpus:
    """Test corpus lookup."""

    def test_eight_cases(self):
        """Test every benchmark exists for both machines."""
        assert len(CORPUS) == 8
        assert {case.key for case in CORPUS} == {
            (name, vm) for name in CASE_NAMES for vm in ("stack", "register")
        }

    def test_filenames(self):
        """Test file names carry the machine's extension."""
        assert get_case("Fibonacci", "stack").filename == "Fibonacci_stack.fng"
        assert get_case("Recursion", "register").filename == "Recursion_register.gnf"

    def test_case_insensitive_names(self):
        """Test names match regardless of case."""
        assert canonical_name("exhaustivecollatz") == "ExhaustiveCollatz"
        assert get_case("RECURSION", "stack").name == "Recursion"

    def test_unknown_name(self):
        """Test an unknown benchmark."""
        with pytest.raises(UnknownCase):
            get_case("Mandelbrot", "stack")

    def test_unknown_machine(self):
        """Test an unknown machine kind."""
        with pytest.raises(UnknownCase):
            get_case("Fibonacci", "accumulator")

    def test_resolve_suite(self):
        """Test `all` and single-name suites."""
        assert resolve_suite("all") == CASE_NAMES
        assert resolve_suite("fibonacci") == ("Fibonacci",)
        with pytest.raises(UnknownCase):
            resolve_suite("nope")

    def test_suite_cases_in_corpus_order(self):
        """Test selected cases keep corpus order, stack first."""
        cases = suite_cases(("Recursion", "Fibonacci"))
        assert [case.key for case in cases] == [
            ("Fibonacci", "stack"),
            ("Fibonacci", "register"),
            ("Recursion", "stack"),
            ("Recursion", "register"),
        ]


class TestOracle:
    """Test closed-form dispatch counts."""

    @pytest.mark.parametrize(
        "name,vm,expected",
        [
            ("Fibonacci", "stack", 14012),
            ("Fibonacci", "register", 3008),
            ("AddictiveAddition", "stack", 30000006),
            ("AddictiveAddition", "register", 20000005),
            ("Recursion", "stack", 9010),
            ("Recursion", "register", 5008),
        ],
    )
    def test_closed_forms(self, name, vm, expected):
        """Test straight-line benchmarks."""
        assert expected_dispatches((name, vm)) == expected

    def test_accepts_case(self):
        """Test a BenchmarkCase is accepted directly."""
        assert expected_dispatches(get_case("Recursion", "register")) == 5008

    def test_unknown(self):
        """Test unknown names and machines."""
        with pytest.raises(UnknownCase):
            expected_dispatches(("Mandelbrot", "stack"))
        with pytest.raises(UnknownCase):
            expected_dispatches(("Fibonacci", "accumulator"))

    def test_collatz_step_counts_small(self):
        """Test trajectories of 1, 2 and 3."""
        # 2 -> 1; 3 -> 10 -> 5 -> 16 -> 8 -> 4 -> 2 -> 1
        assert collatz_step_counts(4) == (3, 2, 6)

    def test_collatz_uses_cost_model(self):
        """Test Collatz counts follow the per-phase costs."""
        starts, odd, even = collatz_step_counts()
        assert starts == 19999
        assert expected_dispatches(("ExhaustiveCollatz", "stack")) == COLLATZ_STACK_COSTS.total(
            starts, odd, even
        )
        assert expected_dispatches(
            ("ExhaustiveCollatz", "register")
        ) == COLLATZ_REGISTER_COSTS.total(starts, odd, even)

    def test_register_saves_dispatches(self):
        """Test the register listing dispatches less for every benchmark."""
        for name in CASE_NAMES:
            assert expected_dispatches((name, "register")) < expected_dispatches((name, "stack"))


class TestPublished:
    """Test the published reference figures."""

    def test_complete(self):
        """Test every corpus case has a published entry."""
        assert set(PUBLISHED) == {case.key for case in CORPUS}

    def test_reproducible_counts(self):
        """Test published counts agree with the oracle where the listing reproduces them."""
        for key in [
            ("Fibonacci", "stack"),
            ("Fibonacci", "register"),
            ("AddictiveAddition", "register"),
            ("Recursion", "stack"),
            ("Recursion", "register"),
        ]:
            assert published_dispatches(*key) == expected_dispatches(key)

    def test_addictive_addition_stack_irreproducible(self):
        """Test the published stack count exceeds what the listing executes."""
        assert published_dispatches("AddictiveAddition", "stack") == 35000007
        assert expected_dispatches(("AddictiveAddition", "stack")) == 30000006
