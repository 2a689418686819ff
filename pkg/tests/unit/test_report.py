"""
Tests for the comparison report and its renderers.
"""

import csv
import io
import json

import pytest

from vm_dispatch_lab.bench import (
    CASE_NAMES,
    compare_report,
    emit,
    expected_dispatches,
    percent_delta,
    published_aggregate,
)
from vm_dispatch_lab.errors import IncompleteResults
from vm_dispatch_lab.instrumentation import Metrics


def timed_results(names=CASE_NAMES):
    """Oracle-exact counts with round phase times."""
    results = {}
    for name in names:
        stack = expected_dispatches((name, "stack"))
        register = expected_dispatches((name, "register"))
        results[(name, "stack")] = Metrics(stack, stack + 10, 10.0, 20.0, 100.0)
        results[(name, "register")] = Metrics(register, register * 3, 12.0, 5.0, 80.0)
    return results


def counts_results(names=CASE_NAMES):
    return {
        key: Metrics(metrics.dispatch_count, metrics.fetch_count)
        for key, metrics in timed_results(names).items()
    }


@pytest.fixture(scope="module")
def full_report():
    return compare_report(timed_results(), fine_timing=True, repetitions=3, warmup=1)


@pytest.fixture(scope="module")
def counts_report():
    return compare_report(counts_results(), fine_timing=False)


class TestPercentDelta:
    """Test the stack-relative delta."""

    def test_positive_when_register_cheaper(self):
        """Test 100 vs 80 is +20%."""
        assert percent_delta(100.0, 80.0) == 20.0

    def test_negative_when_register_costlier(self):
        """Test 100 vs 125 is -25%."""
        assert percent_delta(100.0, 125.0) == -25.0

    def test_zero_stack(self):
        """Test an undefined delta."""
        assert percent_delta(0.0, 5.0) is None


class TestCompareReport:
    """Test report construction."""

    def test_deltas(self, full_report):
        """Test per-name deltas from the phase times."""
        comparison = full_report.comparisons[0]
        assert comparison.name == "Fibonacci"
        assert comparison.exec_time_pct == pytest.approx(20.0)
        assert comparison.dispatch_time_pct == pytest.approx(75.0)
        assert comparison.fetch_time_pct == pytest.approx(-20.0)
        assert comparison.dispatch_count_ratio == pytest.approx(3008 / 14012)

    def test_aggregate_is_mean(self, full_report):
        """Test aggregates are means of the per-name values."""
        ratios = [c.dispatch_count_ratio for c in full_report.comparisons]
        assert full_report.aggregate.dispatch_count_ratio == pytest.approx(sum(ratios) / 4)
        assert full_report.aggregate.exec_time_pct == pytest.approx(20.0)
        assert full_report.aggregate.dispatch_count_ratio < 1.0

    def test_verdicts(self, full_report):
        """Test oracle-exact counts all match."""
        assert full_report.all_match
        assert len(full_report.verdicts) == 8

    def test_mismatch_noted(self):
        """Test a wrong count is reported, not raised."""
        results = timed_results(("Recursion",))
        results[("Recursion", "stack")] = Metrics(9000, 9000)
        report = compare_report(results, ("Recursion",))
        assert not report.all_match
        assert report.verdicts[("Recursion", "stack")].label == "mismatch"
        assert any("Oracle mismatch for Recursion/stack" in note for note in report.notes)

    def test_incomplete(self):
        """Test a missing machine for a requested name."""
        results = timed_results(("Fibonacci",))
        del results[("Fibonacci", "register")]
        with pytest.raises(IncompleteResults):
            compare_report(results, ("Fibonacci",))

    def test_empty_selection(self):
        """Test no benchmark names at all."""
        with pytest.raises(IncompleteResults):
            compare_report({}, ())

    def test_subset_uses_corpus_order(self):
        """Test names are reported in corpus order."""
        report = compare_report(timed_results(), ("Recursion", "Fibonacci"))
        assert report.names == ("Fibonacci", "Recursion")

    def test_davis_estimate_attached(self, full_report):
        """Test each comparison carries an estimate from stack phase times."""
        comparison = full_report.comparisons[0]
        stack = full_report.results[("Fibonacci", "stack")]
        register = full_report.results[("Fibonacci", "register")]
        expected = (
            100.0
            - (stack.dispatch_count - register.dispatch_count) * 20.0 / stack.dispatch_count
            + (register.operand_fetches - stack.operand_fetches) * 10.0 / stack.fetch_count
        )
        assert comparison.davis_estimate_us == pytest.approx(expected)

    def test_notes(self, full_report):
        """Test the known discrepancies are explained."""
        notes = " ".join(full_report.notes)
        assert "AddictiveAddition/stack" in notes
        assert "ExhaustiveCollatz" in notes
        assert "Published headline deltas" in notes

    def test_counts_only(self, counts_report):
        """Test counts-only reports carry no time deltas."""
        assert counts_report.comparisons[0].exec_time_pct is None
        assert counts_report.aggregate.exec_time_pct is None
        assert any("Counts-only" in note for note in counts_report.notes)


class TestPublishedAggregate:
    """Test the published-figure arithmetic."""

    def test_recomputed_headline(self):
        """Test means of the published per-benchmark deltas."""
        published = published_aggregate()
        assert published.exec_time_pct == pytest.approx(20.33, abs=0.1)
        assert published.dispatch_time_pct == pytest.approx(65.48, abs=0.1)
        assert published.fetch_time_pct == pytest.approx(-23.82, abs=0.1)
        assert 0.0 < published.dispatch_count_ratio < 1.0


class TestEmitJson:
    """Test the JSON renderer."""

    def test_document(self, full_report):
        """Test the JSON document layout."""
        document = json.loads(emit(full_report, "json"))
        assert len(document["cases"]) == 8
        assert len(document["comparisons"]) == 4
        assert document["environment"]["timing_mode"] == "fine"
        assert document["environment"]["repetitions"] == 3
        assert document["cases"][0]["exec_time_us"] == 100.0
        assert document["cases"][0]["oracle_verdict"] == "match"

    def test_counts_only_omits_times(self, counts_report):
        """Test timing fields are absent, not null."""
        document = json.loads(emit(counts_report, "json"))
        for case in document["cases"]:
            assert "exec_time_us" not in case
            assert "fetch_time_us" not in case
        assert "exec_time_pct" not in document["comparisons"][0]
        assert set(document["aggregate"]) == {"dispatch_count_ratio"}

    def test_deterministic(self, counts_report):
        """Test rendering the same report twice."""
        assert emit(counts_report, "json") == emit(counts_report, "json")


class TestEmitCsv:
    """Test the CSV renderer."""

    def test_rows(self, full_report):
        """Test case, delta and aggregate rows."""
        rows = list(csv.DictReader(io.StringIO(emit(full_report, "csv"))))
        assert len(rows) == 13
        assert [row["row_type"] for row in rows].count("case") == 8
        assert [row["row_type"] for row in rows].count("delta") == 4
        assert rows[-1]["row_type"] == "aggregate"
        assert rows[-1]["case"] == "all"
        assert rows[0]["dispatch_count"] == "14012"

    def test_counts_only_blank_times(self, counts_report):
        """Test timing columns are empty in counts-only mode."""
        rows = list(csv.DictReader(io.StringIO(emit(counts_report, "csv"))))
        assert rows[0]["exec_time_us"] == ""


class TestEmitMarkdown:
    """Test the Markdown renderer."""

    def test_counts_table(self, full_report):
        """Test the dispatch count table has one row per benchmark."""
        text = emit(full_report, "markdown")
        section = text.split("## Dispatch counts", 1)[1].split("##", 1)[0]
        rows = [line for line in section.splitlines() if line.startswith("| ")]
        assert len(rows) == 1 + 4
        assert "| Fibonacci | 14,012 | 3,008 |" in text
        assert "## Phase times (us)" in text

    def test_counts_only_sections(self, counts_report):
        """Test timing sections are left out."""
        text = emit(counts_report, "markdown")
        assert "## Phase times" not in text
        assert "## Estimated register execution time" not in text
        assert "## Notes" in text

    def test_unknown_format(self, full_report):
        """Test an unsupported format."""
        with pytest.raises(ValueError):
            emit(full_report, "yaml")  # type: ignore[arg-type]
