"""
Benchmark harness

Embedded corpus, dispatch-count oracle, repetition runner, comparison
report and report renderers.
"""

from .corpus import CASE_NAMES, CORPUS, VM_KINDS, BenchmarkCase, get_case, resolve_suite
from .emit import emit
from .oracle import collatz_step_counts, expected_dispatches
from .reference import PUBLISHED, published_dispatches
from .report import BenchReport, compare_report, percent_delta, published_aggregate
from .runner import assemble, execute, instruction_mix, run_case, run_suite

__all__ = [
    "CASE_NAMES",
    "CORPUS",
    "PUBLISHED",
    "VM_KINDS",
    "BenchReport",
    "BenchmarkCase",
    "assemble",
    "collatz_step_counts",
    "compare_report",
    "emit",
    "execute",
    "expected_dispatches",
    "get_case",
    "instruction_mix",
    "percent_delta",
    "published_aggregate",
    "published_dispatches",
    "resolve_suite",
    "run_case",
    "run_suite",
]
