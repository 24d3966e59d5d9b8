"""Mutation clocks.

``discrete``   the n-th mutation happens at time n
``total``      mutations form a rate-1 Poisson process whatever the population
``per_capita`` every live type mutates at rate 1 (total rate = live count)
"""

from __future__ import annotations

import numpy as np

CLOCK_MODES = ("discrete", "total", "per_capita")


def check_clock(mode: str, allowed=CLOCK_MODES) -> str:
    if mode not in allowed:
        raise ValueError(f"clock must be one of {', '.join(allowed)}, got {mode!r}")
    return mode


def holding_time(rng: np.random.Generator, mode: str, live: int) -> float:
    """Time until the next mutation."""
    if mode == "discrete":
        return 1.0
    if mode == "total":
        return float(rng.exponential(1.0))
    return float(rng.exponential(1.0 / live))
