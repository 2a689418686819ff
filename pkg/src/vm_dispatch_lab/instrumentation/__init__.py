"""
Instrumentation for vm-dispatch-lab

Provides the process CPU clock, overhead-corrected measurement, dispatch/fetch
metrics and the register-VM runtime estimate.
"""

from .clock import (
    CpuClock,
    corrected_call,
    corrected_measure,
    default_clock,
    to_micros,
)
from .estimator import DavisInput, davis_estimate, davis_input_from_metrics
from .metrics import Metrics, Phase, aggregate_runs, record_phase

__all__ = [
    "CpuClock",
    "DavisInput",
    "Metrics",
    "Phase",
    "aggregate_runs",
    "corrected_call",
    "corrected_measure",
    "davis_estimate",
    "davis_input_from_metrics",
    "default_clock",
    "record_phase",
    "to_micros",
]
