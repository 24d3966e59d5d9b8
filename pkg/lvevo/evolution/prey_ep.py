"""Prey evolution process.

One predator with fixed death rate, at most two coexisting prey. At each
mutation a live prey is picked uniformly, its mutant is drawn uniformly from
the disk of radius ``epsilon`` around it, and the community moves to the
saturated equilibrium of residents plus mutant.

Only an equilibrium without any prey is absorbing. A single surviving prey
carries on even when the predator has died out, and may then sit outside the
viable region.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from lvevo.core.config import MAX_RESAMPLE, PREY_EP_CLOCK
from lvevo.errors import DegenerateTie, NotViable
from lvevo.evolution.clock import check_clock, holding_time
from lvevo.evolution.events import EventLog
from lvevo.lv.prey import classify_prey_outcome, fitness_at, is_viable, one_prey_sigma, viable_mask
from lvevo.lv.traits import PreyTrait

log = logging.getLogger(__name__)


@dataclass
class PreyEPState:
    y1: PreyTrait
    delta: float
    epsilon: float
    y2: PreyTrait = PreyTrait.ABSENT
    clock: float = 0.0
    clock_mode: str = PREY_EP_CLOCK
    mutations: int = 0
    predator: bool = True
    coexistence_event_times: List[float] = field(default_factory=list)
    two_prey_time: float = 0.0
    absorbed: bool = False

    def __post_init__(self) -> None:
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        check_clock(self.clock_mode, ("total", "per_capita"))
        if not is_viable(self.y1, self.delta):
            raise NotViable(f"initial prey {self.y1.as_tuple()} is outside the viable region")

    @property
    def live(self) -> Tuple[PreyTrait, ...]:
        return tuple(y for y in (self.y1, self.y2) if not y.is_absent)


def sample_disk(rng: np.random.Generator, radius: float) -> Tuple[float, float]:
    """Uniform point of the disk, by rejection from the bounding square."""
    while True:
        x, y = rng.uniform(-1.0, 1.0, 2)
        if x * x + y * y <= 1.0:
            return radius * x, radius * y


def prey_ep_step(
    state: PreyEPState,
    rng: np.random.Generator,
    events: Optional[EventLog] = None,
    horizon: float = math.inf,
) -> PreyEPState:
    """Advance to the next mutation, or to ``horizon`` if that comes first."""
    if state.absorbed:
        return state
    live = state.live
    hold = holding_time(rng, state.clock_mode, len(live))
    elapsed = min(hold, horizon - state.clock)
    if len(live) == 2:
        state.two_prey_time += elapsed
    if state.clock + hold > horizon:
        state.clock = horizon
        return state
    state.clock += hold
    state.mutations += 1

    parent = int(rng.integers(len(live)))
    for _ in range(MAX_RESAMPLE):
        dx, dy = sample_disk(rng, state.epsilon)
        alpha, beta = live[parent].alpha + dx, live[parent].beta + dy
        if alpha <= 0 or beta <= 0:
            # no such prey type; the mutant is lost
            if events is not None:
                events.record(state.clock, parent, alpha, beta, len(live))
            return state
        mutant = PreyTrait(alpha, beta)
        try:
            outcome = classify_prey_outcome(live, mutant, state.delta)
        except DegenerateTie:
            continue
        break
    else:
        raise DegenerateTie(f"{MAX_RESAMPLE} tied mutants in a row around {live[parent].as_tuple()}")

    if outcome.size == 0:
        log.warning("prey EP absorbed at t=%.6g: outcome %s", state.clock, outcome.rule)
        state.y1, state.y2, state.absorbed = PreyTrait.ABSENT, PreyTrait.ABSENT, True
    else:
        if state.predator and not outcome.predator:
            log.info("predator lost at t=%.6g; prey %s carries on alone", state.clock, outcome.survivors[0].as_tuple())
        state.predator = outcome.predator
        if len(live) == 1 and outcome.size == 2:
            state.coexistence_event_times.append(state.clock)
        state.y1 = outcome.survivors[0]
        state.y2 = outcome.survivors[1] if outcome.size == 2 else PreyTrait.ABSENT
    if events is not None:
        events.record(state.clock, parent, alpha, beta, len(state.live))
    return state


@dataclass
class PreyEPRun:
    state: PreyEPState
    times: np.ndarray  # 0 and every mutation time
    y1: np.ndarray  # Y1 after each of those events, shape (len(times), 2)
    events: EventLog

    def y1_at(self, grid) -> np.ndarray:
        """Y1 as a step function evaluated on ``grid``."""
        idx = np.searchsorted(self.times, np.asarray(grid, dtype=float), side="right") - 1
        return self.y1[np.clip(idx, 0, None)]

    @property
    def two_prey_fraction(self) -> float:
        return self.state.two_prey_time / self.state.clock if self.state.clock > 0 else 0.0


def run_prey_ep(
    y0: PreyTrait,
    delta: float,
    epsilon: float,
    t_end: float,
    rng: np.random.Generator,
    clock_mode: str = PREY_EP_CLOCK,
    record_events: bool = True,
) -> PreyEPRun:
    state = PreyEPState(y1=y0, delta=delta, epsilon=epsilon, clock_mode=clock_mode)
    events = EventLog("prey-ep", enabled=record_events)
    events.record(0.0, -1, y0.alpha, y0.beta, 1)
    times, path = [0.0], [y0.as_tuple()]
    while state.clock < t_end and not state.absorbed:
        before = state.mutations
        prey_ep_step(state, rng, events, horizon=t_end)
        if state.mutations != before:
            times.append(state.clock)
            path.append(state.y1.as_tuple())
    log.debug(
        "prey EP: %d mutations, %d coexistence events by t=%g",
        state.mutations,
        len(state.coexistence_event_times),
        state.clock,
    )
    return PreyEPRun(state=state, times=np.array(times), y1=np.array(path), events=events)


def coexistence_probability(
    y: PreyTrait, delta: float, epsilon: float, n: int, rng: np.random.Generator
) -> Tuple[float, float]:
    """Monte Carlo chance that a uniform disk mutant of ``y`` coexists with it.

    Returns ``(estimate, standard error)``.
    """
    if not is_viable(y, delta):
        raise NotViable(f"resident {y.as_tuple()} is not viable")
    points = np.empty((0, 2))
    while len(points) < n:
        draw = rng.uniform(-1.0, 1.0, size=(2 * n, 2))
        points = np.vstack([points, draw[np.einsum("ij,ij->i", draw, draw) <= 1.0]])
    alpha = y.alpha + epsilon * points[:n, 0]
    beta = y.beta + epsilon * points[:n, 1]

    s1, s2 = one_prey_sigma(y.alpha, y.beta, delta)
    invades = fitness_at(s1, s2, alpha, beta) > 0
    ok = (alpha > 0) & (beta > 0) & viable_mask(alpha, beta, delta)
    m1, m2 = one_prey_sigma(alpha, beta, delta)
    invaded_back = fitness_at(m1, m2, y.alpha, y.beta) > 0
    hits = invades & ok & invaded_back
    p = float(hits.mean())
    return p, math.sqrt(p * (1.0 - p) / n)
