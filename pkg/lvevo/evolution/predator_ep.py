"""Two-trait predator evolution process.

One prey with fixed birth rate; predators mutate both consumption and death
rate. The state is always the coexisting set, sorted by increasing ``ell``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from lvevo.core.config import MAX_RESAMPLE, PREDATOR_EP_CLOCK
from lvevo.errors import DegenerateTie, NotCoexisting
from lvevo.evolution.clock import check_clock, holding_time
from lvevo.evolution.events import EventLog
from lvevo.lv.predator import coexisting_prefix, sort_by_ell
from lvevo.lv.traits import PredatorTrait, SystemParams

log = logging.getLogger(__name__)


@dataclass
class PredatorEPState:
    predators: List[PredatorTrait]
    params: SystemParams
    epsilon: float
    clock: float = 0.0
    clock_mode: str = PREDATOR_EP_CLOCK
    mutations: int = 0

    def __post_init__(self) -> None:
        if not self.predators:
            raise ValueError("predator EP needs at least one predator")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        check_clock(self.clock_mode, ("total", "per_capita"))
        self.predators = sort_by_ell(self.predators)
        if coexisting_prefix(self.predators, self.params) != len(self.predators):
            raise NotCoexisting("initial predators do not coexist")

    def cloud(self) -> np.ndarray:
        """``(alpha, log ell)`` of every live predator."""
        return np.array([(x.alpha, math.log(x.ell)) for x in self.predators])


def _mutate(parent: PredatorTrait, existing: Sequence[PredatorTrait], epsilon: float, rng) -> PredatorTrait:
    ells = {x.ell for x in existing}
    for _ in range(MAX_RESAMPLE):
        u1, u2 = rng.uniform(-1.0, 1.0, 2)
        alpha = parent.alpha + epsilon * u1
        if alpha <= 0:
            continue
        mutant = PredatorTrait(alpha, parent.delta * math.exp(epsilon * u2))
        if mutant.ell in ells:
            continue
        return mutant
    raise DegenerateTie(f"no admissible mutant of {parent} after {MAX_RESAMPLE} draws")


def predator_ep_step(
    state: PredatorEPState,
    rng: np.random.Generator,
    events: Optional[EventLog] = None,
    horizon: float = math.inf,
) -> PredatorEPState:
    hold = holding_time(rng, state.clock_mode, len(state.predators))
    if state.clock + hold > horizon:
        state.clock = horizon
        return state
    state.clock += hold
    state.mutations += 1

    parent = int(rng.integers(len(state.predators)))
    mutant = _mutate(state.predators[parent], state.predators, state.epsilon, rng)
    candidates = sort_by_ell(state.predators + [mutant])
    state.predators = candidates[: coexisting_prefix(candidates, state.params)]
    if events is not None:
        events.record(state.clock, parent, mutant.alpha, mutant.delta, len(state.predators))
    return state


@dataclass
class PredatorEPRun:
    state: PredatorEPState
    counts: np.ndarray  # N after mutation n, n = 0..n_end
    mean_alpha: np.ndarray
    mean_log_ell: np.ndarray
    snapshots: Dict[int, np.ndarray] = field(default_factory=dict)
    events: Optional[EventLog] = None


def run_predator_ep(
    x0: PredatorTrait,
    params: SystemParams,
    epsilon: float,
    n_mutations: int,
    rng: np.random.Generator,
    snapshot_at: Sequence[int] = (),
    clock_mode: str = PREDATOR_EP_CLOCK,
    record_events: bool = True,
) -> PredatorEPRun:
    """Run for ``n_mutations`` mutations, keeping the cloud at ``snapshot_at``."""
    state = PredatorEPState([x0], params, epsilon, clock_mode=clock_mode)
    events = EventLog("predator-ep", enabled=record_events)
    events.record(0.0, -1, x0.alpha, x0.delta, 1)
    wanted = set(int(n) for n in snapshot_at)
    counts = np.empty(n_mutations + 1, dtype=int)
    mean_alpha = np.empty(n_mutations + 1)
    mean_log_ell = np.empty(n_mutations + 1)

    def observe(n: int) -> None:
        cloud = state.cloud()
        counts[n] = len(cloud)
        mean_alpha[n], mean_log_ell[n] = cloud.mean(axis=0)
        if n in wanted:
            snapshots[n] = cloud

    snapshots: Dict[int, np.ndarray] = {}
    observe(0)
    for n in range(1, n_mutations + 1):
        predator_ep_step(state, rng, events)
        observe(n)
    log.debug("predator EP: %d types after %d mutations", counts[-1], n_mutations)
    return PredatorEPRun(state, counts, mean_alpha, mean_log_ell, snapshots, events)
