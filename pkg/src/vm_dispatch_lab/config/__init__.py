"""
Configuration modules for vm-dispatch-lab

Provides the validated runtime configuration and logging setup.
"""

from .runtime_config import (
    BenchConfig,
    LabConfig,
    OutputFormat,
    RegExecConfig,
    StackExecConfig,
)
from .utils import configure_logging

__all__ = [
    "BenchConfig",
    "LabConfig",
    "OutputFormat",
    "RegExecConfig",
    "StackExecConfig",
    "configure_logging",
]
