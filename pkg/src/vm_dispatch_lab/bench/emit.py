"""
Report renderers: JSON, CSV and Markdown.

All three render the same numbers. JSON and CSV keep them unrounded;
Markdown rounds for reading only. Output is deterministic for a given report.
"""

import csv
import io
import json
import logging

from ..config import OutputFormat
from .corpus import VM_KINDS
from .reference import PUBLISHED
from .report import BenchReport

logger = logging.getLogger(__name__)

CSV_FIELDS = [
    "row_type",
    "case",
    "vm",
    "dispatch_count",
    "fetch_count",
    "fetch_time_us",
    "dispatch_time_us",
    "exec_time_us",
    "oracle_verdict",
    "expected_dispatches",
    "published_dispatches_count",
    "dispatch_count_ratio",
    "exec_time_pct",
    "dispatch_time_pct",
    "fetch_time_pct",
    "davis_estimate_us",
]


def emit_json(report: BenchReport) -> str:
    return json.dumps(report.to_document(), indent=2) + "\n"


def emit_csv(report: BenchReport) -> str:
    """One row per case, one delta row per benchmark name, one aggregate row."""
    buffer = io.StringIO()
    writer = csv.DictWriter(
        buffer, CSV_FIELDS, restval="", extrasaction="ignore", lineterminator="\n"
    )
    writer.writeheader()
    for case in report.case_records():
        writer.writerow({"row_type": "case", **case})
    for comparison in report.comparison_records():
        writer.writerow({"row_type": "delta", **comparison})
    aggregate = report.aggregate.to_record(report.fine_timing)
    writer.writerow({"row_type": "aggregate", "case": "all", **aggregate})
    return buffer.getvalue()


def _num(value: float | int | None, digits: int = 3) -> str:
    if value is None:
        return "n/a"
    if isinstance(value, int):
        return f"{value:,}"
    return f"{value:,.{digits}f}"


def _pct(value: float | None) -> str:
    return "n/a" if value is None else f"{value:+.2f}%"


def _table(header: list[str], rows: list[list[str]]) -> list[str]:
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    lines += ["| " + " | ".join(row) + " |" for row in rows]
    return lines


def emit_markdown(report: BenchReport) -> str:
    lines = ["# Stack vs register dispatch report", ""]

    lines += ["## Dispatch counts", ""]
    rows = []
    for name in report.names:
        stack, register = report.results[(name, "stack")], report.results[(name, "register")]
        verdicts = [report.verdicts[(name, vm)].label for vm in VM_KINDS]
        rows.append(
            [
                name,
                _num(stack.dispatch_count),
                _num(register.dispatch_count),
                _num(PUBLISHED[(name, "stack")].dispatch_count),
                _num(PUBLISHED[(name, "register")].dispatch_count),
                " / ".join(verdicts),
            ]
        )
    lines += _table(
        ["Benchmark", "Stack", "Register", "Stack (published)", "Register (published)", "Oracle"],
        rows,
    )
    lines.append("")

    if report.fine_timing:
        lines += ["## Phase times (us)", ""]
        rows = []
        for name in report.names:
            for vm in VM_KINDS:
                metrics = report.results[(name, vm)]
                rows.append(
                    [
                        name,
                        vm,
                        _num(metrics.fetch_time_us),
                        _num(metrics.dispatch_time_us),
                        _num(metrics.exec_time_us),
                    ]
                )
        lines += _table(["Benchmark", "VM", "Fetch", "Dispatch", "Execution"], rows)
        lines.append("")

    lines += ["## Stack minus register (% of stack)", ""]
    rows = [
        [
            c.name,
            f"{c.dispatch_count_ratio:.4f}",
            _pct(c.exec_time_pct),
            _pct(c.dispatch_time_pct),
            _pct(c.fetch_time_pct),
        ]
        for c in report.comparisons
    ]
    aggregate, published = report.aggregate, report.published
    rows.append(
        [
            "**mean**",
            f"{aggregate.dispatch_count_ratio:.4f}",
            _pct(aggregate.exec_time_pct),
            _pct(aggregate.dispatch_time_pct),
            _pct(aggregate.fetch_time_pct),
        ]
    )
    rows.append(
        [
            "published mean",
            f"{published.dispatch_count_ratio:.4f}",
            _pct(published.exec_time_pct),
            _pct(published.dispatch_time_pct),
            _pct(published.fetch_time_pct),
        ]
    )
    lines += _table(
        ["Benchmark", "Register/stack dispatches", "Execution", "Dispatch", "Fetch"], rows
    )
    lines.append("")

    if report.fine_timing:
        lines += ["## Estimated register execution time (us)", ""]
        rows = [
            [c.name, _num(c.davis_estimate_us), _num(c.register_exec_time_us)]
            for c in report.comparisons
        ]
        lines += _table(["Benchmark", "Estimated", "Measured"], rows)
        lines.append("")

    lines += ["## Notes", ""]
    lines += [f"- {note}" for note in report.notes]
    return "\n".join(lines) + "\n"


_RENDERERS = {
    "json": emit_json,
    "csv": emit_csv,
    "markdown": emit_markdown,
}


def emit(report: BenchReport, output_format: OutputFormat = "json") -> str:
    """Render a report in the requested format."""
    renderer = _RENDERERS.get(output_format)
    if renderer is None:
        raise ValueError(f"Unknown output format '{output_format}'")
    logger.debug(f"Rendering {len(report.names)} benchmark(s) as {output_format}")
    return renderer(report)
