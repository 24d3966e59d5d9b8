"""Delta predator evolution process.

Every predator consumes at rate 1, so a type is its log-trait
``X = -log(delta)``. Types are particles on the line: each gives birth at
rate 1 to a child displaced by ``epsilon * U`` and the population is then
cut back from the left (smallest ``X``) until the fixed-alpha coexistence
condition holds again.

The population can reach tens of thousands of particles, so the state keeps
``-X`` in an ascending python list (``bisect`` insertion, pops at the end
remove the least fit type) and the running sum ``S = sum exp(-X_j)``
incrementally. ``S`` is recomputed exactly with :func:`math.fsum` every
:data:`RESYNC_EVERY` insertions and after every truncation.
"""

from __future__ import annotations

import bisect
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from lvevo.core.config import DPEP_CLOCK, MAX_RESAMPLE
from lvevo.errors import BudgetExceeded, DegenerateTie, NotCoexisting
from lvevo.evolution.clock import check_clock, holding_time
from lvevo.evolution.events import EventLog
from lvevo.lv.predator import check_fixed_alpha, coexistence_guarantee_level
from lvevo.lv.traits import SystemParams

log = logging.getLogger(__name__)

RESYNC_EVERY = 1024


@dataclass
class DPEPState:
    params: SystemParams
    epsilon: float = 1.0
    clock: float = 0.0
    clock_mode: str = DPEP_CLOCK
    insertions: int = 0
    _neg: List[float] = field(default_factory=list, repr=False)
    _weight: float = 0.0
    _guaranteed: int = 0

    @classmethod
    def start(cls, xs, params: SystemParams, **kwargs) -> "DPEPState":
        xs = sorted((float(x) for x in xs), reverse=True)
        if not xs or not check_fixed_alpha(xs, params):
            raise NotCoexisting(f"initial log-traits {xs} do not coexist")
        state = cls(params, **kwargs)
        state._neg = [-x for x in xs]
        state._resync()
        state._update_guaranteed()
        return state

    def __post_init__(self) -> None:
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        check_clock(self.clock_mode)

    @property
    def n_types(self) -> int:
        return len(self._neg)

    @property
    def x_max(self) -> float:
        return -self._neg[0]

    @property
    def x_min(self) -> float:
        return -self._neg[-1]

    def positions(self) -> np.ndarray:
        """Log-traits in decreasing order."""
        return -np.asarray(self._neg)

    def x_at(self, rank: int) -> float:
        """Log-trait of the ``rank``-th fittest type, counting from 0."""
        return -self._neg[rank]

    def contains(self, x: float) -> bool:
        i = bisect.bisect_left(self._neg, -x)
        return i < len(self._neg) and self._neg[i] == -x

    @property
    def guaranteed_count(self) -> int:
        """Largest ``m`` whose ``m`` fittest types all lie above
        :func:`coexistence_guarantee_level` ``(m)``.

        Those ``m`` types are never removed again and the fittest values only
        grow, so the count never decreases.
        """
        return self._guaranteed

    def _update_guaranteed(self) -> None:
        m = self._guaranteed
        while m < len(self._neg) and self.x_at(m) > coexistence_guarantee_level(m + 1, self.params):
            m += 1
        self._guaranteed = m

    def _resync(self) -> None:
        self._weight = math.fsum(math.exp(v) for v in self._neg)

    def _coexists(self) -> bool:
        # e^{-X_N} (beta + N) - sum_j e^{-X_j} < r
        return math.exp(self._neg[-1]) * (self.params.beta + len(self._neg)) - self._weight < self.params.r

    def insert(self, x: float) -> List[float]:
        """Add a type and truncate. Returns the removed log-traits."""
        bisect.insort(self._neg, -x)
        self._weight += math.exp(-x)
        self.insertions += 1
        if self.insertions % RESYNC_EVERY == 0:
            self._resync()
        removed = []
        while len(self._neg) > 1 and not self._coexists():
            v = self._neg.pop()
            self._weight -= math.exp(v)
            removed.append(-v)
        if removed:
            self._resync()
        self._update_guaranteed()
        return removed


def draw_mutant(state: DPEPState, parent: int, rng: np.random.Generator) -> float:
    for _ in range(MAX_RESAMPLE):
        x = state.x_at(parent) + state.epsilon * rng.uniform(-1.0, 1.0)
        if not state.contains(x):
            return x
    raise DegenerateTie(f"no admissible mutant of X={state.x_at(parent)} after {MAX_RESAMPLE} draws")


def dpep_step(
    state: DPEPState,
    rng: np.random.Generator,
    events: Optional[EventLog] = None,
    horizon: float = math.inf,
) -> DPEPState:
    """Next insertion, or stop at ``horizon`` if it comes first."""
    hold = holding_time(rng, state.clock_mode, state.n_types)
    if state.clock + hold > horizon:
        state.clock = horizon
        return state
    state.clock += hold
    parent = int(rng.integers(state.n_types))
    x = draw_mutant(state, parent, rng)
    state.insert(x)
    if events is not None:
        events.record(state.clock, parent, x, 1.0, state.n_types)
    return state


@dataclass
class DPEPRun:
    state: DPEPState
    times: np.ndarray
    x_max: np.ndarray
    x_min: np.ndarray
    counts: np.ndarray
    guaranteed: np.ndarray
    events: Optional[EventLog] = None

    @property
    def log_count_rate(self) -> float:
        """``(1/t) log N_t`` at the last sample."""
        return math.log(self.counts[-1]) / self.times[-1]


def run_dpep(
    params: SystemParams,
    t_end: float,
    rng: np.random.Generator,
    x0: float = 1.0,
    epsilon: float = 1.0,
    clock_mode: str = DPEP_CLOCK,
    max_events: Optional[int] = None,
    sample_every: int = 1,
    record_events: bool = True,
    progress_every: int = 10_000,
) -> DPEPRun:
    """Run until ``t_end``.

    If ``max_events`` insertions happen first, :class:`BudgetExceeded` is
    raised carrying the run so far.
    """
    state = DPEPState.start([x0], params, epsilon=epsilon, clock_mode=clock_mode)
    events = EventLog("dpep", enabled=record_events)
    events.record(0.0, -1, x0, 1.0, 1)
    rows = [(0.0, x0, x0, 1, state.guaranteed_count)]
    log.info("DPEP: X0=%g r=%g until t=%g", x0, params.r, t_end)

    def finish() -> DPEPRun:
        cols = [np.array(c) for c in zip(*rows)]
        return DPEPRun(state, *cols, events=events)

    n = 0
    while state.clock < t_end:
        dpep_step(state, rng, events, horizon=t_end)
        if state.insertions == n:
            break
        n = state.insertions
        if n % sample_every == 0:
            rows.append((state.clock, state.x_max, state.x_min, state.n_types, state.guaranteed_count))
        if progress_every and n % progress_every == 0:
            log.debug("DPEP t=%.3f N=%d X_max=%.3f X_min=%.3f", state.clock, state.n_types, state.x_max, state.x_min)
        if max_events is not None and n >= max_events and state.clock < t_end:
            log.warning("DPEP budget of %d insertions hit at t=%.4g", max_events, state.clock)
            raise BudgetExceeded(f"DPEP stopped after {n} insertions at t={state.clock:.4g}", partial=finish())
    log.info("DPEP done: %d insertions, N=%d at t=%g", n, state.n_types, t_end)
    return finish()
