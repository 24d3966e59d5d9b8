"""Alpha predator evolution process (death rate fixed at 1).

Predators are identified with their consumption rates, kept in decreasing
order. Each mutation adds ``alpha_parent + epsilon * U`` and the list is cut
back to its longest prefix satisfying the fixed-delta coexistence condition.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from lvevo.core.config import APEP_CLOCK, MAX_RESAMPLE
from lvevo.errors import DegenerateTie, NotCoexisting
from lvevo.evolution.clock import check_clock, holding_time
from lvevo.evolution.events import EventLog
from lvevo.lv.predator import check_fixed_delta, fixed_delta_prefix
from lvevo.lv.traits import SystemParams

log = logging.getLogger(__name__)


@dataclass
class APEPState:
    alphas: np.ndarray
    params: SystemParams
    epsilon: float
    step_count: int = 0
    clock: float = 0.0
    clock_mode: str = APEP_CLOCK

    def __post_init__(self) -> None:
        self.alphas = np.asarray(self.alphas, dtype=float)
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        check_clock(self.clock_mode)
        if self.alphas.size == 0 or not check_fixed_delta(self.alphas, self.params):
            raise NotCoexisting(f"initial consumption rates {self.alphas} do not coexist")

    @property
    def n_types(self) -> int:
        return self.alphas.size

    @property
    def alpha_min(self) -> float:
        return float(self.alphas[-1])

    @property
    def alpha_max(self) -> float:
        return float(self.alphas[0])

    @property
    def differences(self) -> np.ndarray:
        """``d_j = alpha_j - alpha_min``."""
        return self.alphas - self.alphas[-1]


def apep_step(state: APEPState, rng: np.random.Generator, events: Optional[EventLog] = None) -> APEPState:
    alphas = state.alphas
    state.clock += holding_time(rng, state.clock_mode, alphas.size)
    state.step_count += 1
    parent = int(rng.integers(alphas.size))
    for _ in range(MAX_RESAMPLE):
        new = alphas[parent] + state.epsilon * rng.uniform(-1.0, 1.0)
        pos = int(np.searchsorted(-alphas, -new))
        tied = (pos < alphas.size and alphas[pos] == new) or (pos > 0 and alphas[pos - 1] == new)
        if new > 0 and not tied:
            break
    else:
        raise DegenerateTie(f"no admissible mutant of {alphas[parent]} after {MAX_RESAMPLE} draws")
    candidates = np.insert(alphas, pos, new)
    state.alphas = candidates[: fixed_delta_prefix(candidates, state.params)]
    if events is not None:
        events.record(state.clock, parent, new, 1.0, state.alphas.size)
    return state


@dataclass
class APEPRun:
    state: APEPState
    steps: np.ndarray
    times: np.ndarray
    counts: np.ndarray
    alpha_min: np.ndarray
    alpha_max: np.ndarray
    events: Optional[EventLog] = None

    @property
    def max_spacing(self) -> np.ndarray:
        """Largest distance between coexisting consumption rates."""
        return self.alpha_max - self.alpha_min


def run_apep(
    alpha0: float,
    params: SystemParams,
    epsilon: float,
    n_steps: int,
    rng: np.random.Generator,
    clock_mode: str = APEP_CLOCK,
    record_every: int = 1,
    record_events: bool = True,
) -> APEPRun:
    state = APEPState(np.array([alpha0]), params, epsilon, clock_mode=clock_mode)
    events = EventLog("apep", enabled=record_events)
    events.record(0.0, -1, alpha0, 1.0, 1)
    rows = [(0, 0.0, 1, alpha0, alpha0)]
    for n in range(1, n_steps + 1):
        apep_step(state, rng, events)
        if n % record_every == 0 or n == n_steps:
            rows.append((n, state.clock, state.n_types, state.alpha_min, state.alpha_max))
    steps, times, counts, lo, hi = (np.array(col) for col in zip(*rows))
    log.debug("APEP eps=%g: N=%d alpha_min=%.4f after %d steps", epsilon, state.n_types, state.alpha_min, n_steps)
    return APEPRun(state, steps, times, counts, lo, hi, events)


def count_bound(params: SystemParams, epsilon: float) -> int:
    """``ceil(4 r / epsilon)``: at most this many types sit above
    ``alpha_min + epsilon / 4``."""
    return math.ceil(4.0 * params.r / epsilon)
