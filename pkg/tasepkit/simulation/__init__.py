"""Monte Carlo simulation of the backward-sequential TASEP."""

from .montecarlo import (
    JumpOffSample,
    SimState,
    run_jump_off,
    sample_paths,
    simulate_positions,
    step,
)

__all__ = [
    "JumpOffSample",
    "SimState",
    "run_jump_off",
    "sample_paths",
    "simulate_positions",
    "step",
]
