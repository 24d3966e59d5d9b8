"""Branching-selection model with a fixed number ``M`` of particles.

Births happen at total rate ``M`` from a uniformly chosen parent; after each
birth the leftmost particle is deleted. Its front speed ``a_M`` increases to
the free walk's speed ``a`` very slowly, roughly like ``(log M) ** -2``.
"""

from __future__ import annotations

import bisect
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from lvevo.analysis import TrajectorySample, slope_estimate
from lvevo.core.config import BURN_IN
from lvevo.errors import BudgetExceeded
from lvevo.evolution.dpep import DPEPState, draw_mutant
from lvevo.lv.traits import SystemParams

log = logging.getLogger(__name__)


class ToyState:
    """``M`` positions, kept as ``-x`` in ascending order so rank 0 is the
    rightmost particle."""

    def __init__(self, positions: Sequence[float], clock: float = 0.0) -> None:
        if len(positions) == 0:
            raise ValueError("M must be >= 1")
        self._neg: List[float] = sorted(-float(x) for x in positions)
        self.clock = clock

    @property
    def size(self) -> int:
        return len(self._neg)

    def positions(self) -> np.ndarray:
        """Decreasing."""
        return -np.asarray(self._neg)

    def at(self, rank: int) -> float:
        return -self._neg[rank]

    @property
    def front(self) -> float:
        return -self._neg[0]

    def birth(self, parent: int, displacement: float) -> None:
        bisect.insort(self._neg, -(self.at(parent) + displacement))
        self._neg.pop()


@dataclass
class ToyRun:
    state: ToyState
    times: np.ndarray
    fronts: np.ndarray
    speed: float
    stderr: float


def simulate_toy(
    M: int,
    t_end: float,
    rng: np.random.Generator,
    n_samples: int = 200,
    burn_in: float = BURN_IN,
) -> ToyRun:
    """All ``M`` particles start at 0; the speed is the slope of the front."""
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    state = ToyState([0.0] * M)
    grid = np.linspace(0.0, t_end, n_samples + 1)
    fronts = np.empty(grid.size)
    k = 0
    while True:
        t_next = state.clock + rng.exponential(1.0 / M)
        while k < grid.size and grid[k] <= min(t_next, t_end):
            fronts[k] = state.front
            k += 1
        if t_next >= t_end:
            break
        state.clock = t_next
        state.birth(int(rng.integers(M)), rng.uniform(-1.0, 1.0))
    state.clock = t_end
    speed, stderr = slope_estimate(TrajectorySample(grid, fronts), burn_in=burn_in)
    log.debug("toy M=%d: a_M=%.4f +- %.4f", M, speed, stderr)
    return ToyRun(state, grid, fronts, speed, stderr)


@dataclass
class CoupledToy:
    dpep: DPEPState
    toy: ToyState
    start_time: float
    checks: int
    violations: int


def coupled_toy_dpep(
    params: SystemParams,
    M: int,
    t_end: float,
    rng: np.random.Generator,
    x0: float = 1.0,
    max_events: int = 200_000,
) -> CoupledToy:
    """Run the delta process and, once its ``M`` fittest types can no longer
    be removed, start a toy model on them.

    Births from the top ``M`` types of the delta process are replayed in the
    toy model by rank with the same displacement, so the toy sees rate ``M``
    and uniform parents. After every event ``X_i >= Y_i`` is checked for
    ``i < M``.
    """
    dpep = DPEPState.start([x0], params)
    toy: Optional[ToyState] = None
    start_time = float("nan")
    checks = violations = 0
    for _ in range(max_events):
        if toy is None and dpep.guaranteed_count >= M:
            toy = ToyState(dpep.positions()[:M], clock=dpep.clock)
            start_time = dpep.clock
        t_next = dpep.clock + rng.exponential(1.0 / dpep.n_types)
        if t_next >= t_end:
            dpep.clock = t_end
            break
        dpep.clock = t_next
        parent = int(rng.integers(dpep.n_types))
        x = draw_mutant(dpep, parent, rng)
        displacement = x - dpep.x_at(parent)
        dpep.insert(x)
        if toy is not None:
            if parent < M:
                toy.birth(parent, displacement)
            toy.clock = t_next
            checks += 1
            top = np.array([dpep.x_at(i) for i in range(M)])
            # the replayed child is rebuilt from a difference, allow for rounding
            violations += int(np.any(top < toy.positions() - 1e-12))
    else:
        raise BudgetExceeded(f"coupling ran {max_events} events without reaching t={t_end}", partial=dpep)
    if toy is None:
        log.warning("toy coupling never started: guarantee for M=%d not reached by t=%g", M, t_end)
        toy = ToyState(dpep.positions()[:M] if dpep.n_types >= M else [dpep.x_max] * M, clock=t_end)
    return CoupledToy(dpep, toy, start_time, checks, violations)
