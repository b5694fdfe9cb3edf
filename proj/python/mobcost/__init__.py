"""Mobility-management cost models, tracking optimization and simulation."""

from ._mobcost import (
    MobcostError,
    analyze,
    chain_statistics,
    cost,
    optimize_H,
    run_command,
    simulate,
)

__all__ = [
    "MobcostError",
    "analyze",
    "chain_statistics",
    "cost",
    "optimize_H",
    "run_command",
    "simulate",
]
