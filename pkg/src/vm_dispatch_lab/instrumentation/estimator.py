"""
Register-VM runtime estimate from stack-VM measurements.

    T_VRM ~= T_VSM - #dispatches * T_dispatch + #fetches * T_fetch

where #dispatches is the number of dispatches the register machine saves and
#fetches the number of extra operand fetches it performs.
"""

import logging

from pydantic import BaseModel, ConfigDict, Field

from .metrics import Metrics

logger = logging.getLogger(__name__)


class DavisInput(BaseModel):
    """Inputs to the estimation formula (times in microseconds)."""

    model_config = ConfigDict(frozen=True)

    t_vsm_us: float = Field(ge=0.0, description="Stack-VM execution time")
    delta_dispatches: int = Field(ge=0, description="Dispatches saved by the register VM")
    t_dispatch_us: float = Field(ge=0.0, description="Cost of one dispatch")
    delta_fetches: int = Field(ge=0, description="Extra operand fetches of the register VM")
    t_fetch_us: float = Field(ge=0.0, description="Cost of one fetch")


def davis_estimate(estimate_input: DavisInput) -> float:
    """
    Estimate the register-VM execution time in microseconds.

    The result may be negative for pathological inputs and is returned as computed.
    """
    return (
        estimate_input.t_vsm_us
        - estimate_input.delta_dispatches * estimate_input.t_dispatch_us
        + estimate_input.delta_fetches * estimate_input.t_fetch_us
    )


def davis_input_from_metrics(stack: Metrics, register: Metrics) -> DavisInput | None:
    """
    Build estimation inputs from measured stack and register metrics.

    Per-unit costs are the stack VM's mean phase times. Returns None when the
    stack run carries no phase timing (counts-only mode).
    """
    t_dispatch = stack.mean_dispatch_time_us
    t_fetch = stack.mean_fetch_time_us
    if t_dispatch is None or t_fetch is None or stack.dispatch_time_us <= 0.0:
        logger.debug("No stack phase timing available, skipping estimate")
        return None

    return DavisInput(
        t_vsm_us=max(0.0, stack.exec_time_us),
        delta_dispatches=max(0, stack.dispatch_count - register.dispatch_count),
        t_dispatch_us=t_dispatch,
        delta_fetches=max(0, register.operand_fetches - stack.operand_fetches),
        t_fetch_us=max(0.0, t_fetch),
    )
