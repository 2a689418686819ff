"""
Runtime Configuration for vm-dispatch-lab.

This module centralizes all runtime configuration from environment variables
using Pydantic for validation, type safety, and clear defaults. Each section
configures one consumer: the stack interpreter, the register interpreter, and
the benchmark harness.
"""

import logging
import os
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field

logger = logging.getLogger(__name__)

OutputFormat = Literal["json", "csv", "markdown"]


class StackExecConfig(BaseModel):
    """Stack interpreter configuration."""

    model_config = ConfigDict(frozen=True)

    stack_capacity: int = Field(
        default=4096,
        ge=16,
        description="Maximum number of values on each operand stack (local and global)",
    )
    max_call_depth: int = Field(
        default=65536,
        ge=1,
        description="Maximum nesting of procedure activations",
    )
    fine_timing: bool = Field(
        default=True,
        description="Time the fetch and dispatch phase of every instruction",
    )
    sink: Any = Field(
        default=None,
        exclude=True,
        description="Object with write(str) receiving print output (None = capture only)",
    )


class RegExecConfig(BaseModel):
    """Register interpreter configuration."""

    model_config = ConfigDict(frozen=True)

    memory_size: int = Field(
        default=65536,
        ge=2,
        description="Number of 32-bit memory cells",
    )
    max_call_depth: int = Field(
        default=65536,
        ge=1,
        description="Maximum depth of the return-address stack",
    )
    fine_timing: bool = Field(
        default=True,
        description="Time the fetch and dispatch phase of every instruction",
    )
    sink: Any = Field(
        default=None,
        exclude=True,
        description="Object with write(str) receiving print output (None = capture only)",
    )


class BenchConfig(BaseModel):
    """Benchmark harness configuration."""

    model_config = ConfigDict(frozen=True)

    repetitions: int = Field(
        default=15,
        ge=1,
        description="Measured runs per case (averaged)",
    )
    warmup: int = Field(
        default=1,
        ge=0,
        description="Discarded runs before measuring",
    )
    fine_timing: bool = Field(
        default=True,
        description="Collect per-instruction phase times (False = counts-only)",
    )
    output_format: OutputFormat = Field(
        default="json",
        description="Report rendering",
    )


class LabConfig(BaseModel):
    """
    Complete runtime configuration for vm-dispatch-lab.

    Example:
        >>> config = LabConfig.from_env()
        >>> config.stack_vm.stack_capacity
        4096
    """

    model_config = ConfigDict(frozen=True)

    stack_vm: StackExecConfig = Field(default_factory=StackExecConfig)
    register_vm: RegExecConfig = Field(default_factory=RegExecConfig)
    bench: BenchConfig = Field(default_factory=BenchConfig)

    @staticmethod
    def _parse_int(name: str, default: int) -> int:
        """
        Parse an integer environment variable, falling back to the default on bad input.

        Args:
            name: Environment variable name
            default: Value used when unset or invalid

        Returns:
            Parsed integer value
        """
        value = os.getenv(name)
        if not value:
            return default
        try:
            return int(value)
        except ValueError:
            logger.warning(f"Invalid {name} value '{value}', using default {default}")
            return default

    @classmethod
    def from_env(cls) -> "LabConfig":
        """
        Create LabConfig from environment variables.

        Returns:
            LabConfig instance with values from environment
        """
        fine_timing = os.getenv("VMLAB_FINE_TIMING", "true").lower() == "true"
        max_depth = cls._parse_int("VMLAB_MAX_CALL_DEPTH", 65536)
        return cls(
            stack_vm=StackExecConfig(
                stack_capacity=cls._parse_int("VMLAB_STACK_CAPACITY", 4096),
                max_call_depth=max_depth,
                fine_timing=fine_timing,
            ),
            register_vm=RegExecConfig(
                memory_size=cls._parse_int("VMLAB_MEMORY_SIZE", 65536),
                max_call_depth=max_depth,
                fine_timing=fine_timing,
            ),
            bench=BenchConfig(
                repetitions=cls._parse_int("VMLAB_BENCH_REPS", 15),
                warmup=cls._parse_int("VMLAB_BENCH_WARMUP", 1),
                fine_timing=fine_timing,
                output_format=os.getenv("VMLAB_OUTPUT_FORMAT", "json").lower(),  # type: ignore[arg-type]
            ),
        )

    def with_fine_timing(self, enabled: bool) -> "LabConfig":
        """Return a copy with fine timing switched on or off in every section."""
        return self.model_copy(
            update={
                "stack_vm": self.stack_vm.model_copy(update={"fine_timing": enabled}),
                "register_vm": self.register_vm.model_copy(update={"fine_timing": enabled}),
                "bench": self.bench.model_copy(update={"fine_timing": enabled}),
            }
        )
