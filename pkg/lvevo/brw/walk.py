"""Branching random walk on the line, with and without a moving killing wall.

Each particle gives birth at rate 1; the child sits at the parent's position
plus Uniform[-1, 1] and positions never change afterwards. With a wall at
``-K + gamma * t`` a particle at ``x`` dies at the known time
``(x + K) / gamma``, so kill times go into a heap when particles are born and
are processed exactly, interleaved with the births.
"""

from __future__ import annotations

import heapq
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from lvevo.analysis import TrajectorySample, slope_estimate
from lvevo.brw.rates import front_log_correction, growth_exponent
from lvevo.core.config import BURN_IN, PARTICLE_BUDGET
from lvevo.core.rng import RngStream, as_generator
from lvevo.errors import BudgetExceeded, Extinct, InsufficientData
from lvevo.evolution.dpep import DPEPState
from lvevo.lv.traits import SystemParams

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class KillBoundary:
    offset: float  # K
    slope: float  # gamma

    def __post_init__(self) -> None:
        if not self.offset > 0:
            raise ValueError(f"K must be positive, got {self.offset}")
        if not self.slope > 0:
            raise ValueError(f"gamma must be positive, got {self.slope}")

    def at(self, t: float) -> float:
        return -self.offset + self.slope * t

    def kill_time(self, x: float) -> float:
        return (x + self.offset) / self.slope


@dataclass
class BRWRun:
    """Samples of one run. ``tail_counts`` counts particles at or beyond
    ``tail_speed * t`` and is only filled when a tail speed was given."""

    times: List[float] = field(default_factory=list)
    counts: List[int] = field(default_factory=list)
    maxima: List[float] = field(default_factory=list)
    minima: List[float] = field(default_factory=list)
    tail_counts: List[int] = field(default_factory=list)
    births: int = 0
    kills: int = 0
    positions: Optional[np.ndarray] = None

    @property
    def extinct(self) -> bool:
        return bool(self.counts) and self.counts[-1] == 0

    def as_rows(self) -> List[tuple]:
        return list(zip(self.times, self.counts, self.maxima, self.minima))


class _Population:
    """Positions with O(1) uniform choice and removal by id."""

    def __init__(self) -> None:
        self.positions: List[float] = []
        self.ids: List[int] = []
        self.slot: dict = {}
        self._next = 0

    def __len__(self) -> int:
        return len(self.positions)

    def add(self, x: float) -> int:
        pid = self._next
        self._next += 1
        self.slot[pid] = len(self.positions)
        self.positions.append(x)
        self.ids.append(pid)
        return pid

    def remove(self, pid: int) -> None:
        i = self.slot.pop(pid)
        last_x = self.positions.pop()
        last_id = self.ids.pop()
        if i < len(self.positions):
            self.positions[i] = last_x
            self.ids[i] = last_id
            self.slot[last_id] = i


def _sample(run: BRWRun, pop: _Population, t: float, tail_speed: Optional[float]) -> None:
    run.times.append(t)
    run.counts.append(len(pop))
    if pop.positions:
        arr = np.asarray(pop.positions)
        run.maxima.append(float(arr.max()))
        run.minima.append(float(arr.min()))
        if tail_speed is not None:
            run.tail_counts.append(int(np.count_nonzero(arr >= tail_speed * t)))
    else:
        run.maxima.append(math.nan)
        run.minima.append(math.nan)
        if tail_speed is not None:
            run.tail_counts.append(0)


def simulate_brw(
    x0: float,
    t_end: float,
    rng: np.random.Generator,
    kill: Optional[KillBoundary] = None,
    sample_times: Optional[Sequence[float]] = None,
    tail_speed: Optional[float] = None,
    budget: int = PARTICLE_BUDGET,
) -> BRWRun:
    """Gillespie simulation up to ``t_end``.

    ``sample_times`` defaults to ``t_end`` alone. Growing past ``budget``
    particles raises :class:`BudgetExceeded` with the samples taken so far.
    """
    if not math.isfinite(t_end) or t_end < 0:
        raise ValueError(f"t_end must be finite and >= 0, got {t_end}")
    grid = sorted(float(s) for s in (sample_times if sample_times is not None else [t_end]))
    run = BRWRun()
    pop = _Population()
    heap: List[tuple] = []

    def born(x: float, now: float) -> bool:
        if kill is None:
            pop.add(x)
            return True
        if kill.kill_time(x) <= now:
            # landed left of the wall
            return False
        heapq.heappush(heap, (kill.kill_time(x), pop.add(x)))
        return True

    t = 0.0
    born(x0, t)
    next_sample = 0
    while True:
        n = len(pop)
        birth_at = t + rng.exponential(1.0 / n) if n else math.inf
        kill_at = heap[0][0] if heap else math.inf
        t_next = min(birth_at, kill_at, t_end)
        while next_sample < len(grid) and grid[next_sample] <= t_next:
            # nothing changes between events
            _sample(run, pop, grid[next_sample], tail_speed)
            next_sample += 1
        if t_next >= t_end or n == 0:
            break
        t = t_next
        if kill_at <= birth_at:
            _kt, pid = heapq.heappop(heap)
            pop.remove(pid)
            run.kills += 1
            continue
        parent = pop.positions[int(rng.integers(n))]
        run.births += 1
        if not born(parent + rng.uniform(-1.0, 1.0), t):
            run.kills += 1
        if len(pop) > budget:
            log.warning("BRW budget of %d particles exceeded at t=%.4g", budget, t)
            raise BudgetExceeded(f"{len(pop)} particles at t={t:.4g} exceed the budget {budget}", partial=run)
    while next_sample < len(grid):
        _sample(run, pop, grid[next_sample], tail_speed)
        next_sample += 1
    run.positions = np.asarray(pop.positions)
    return run


# --------------------------------------------------------------------------- #
#  Estimators built on many runs
# --------------------------------------------------------------------------- #
def front_speed(run: BRWRun, burn_in: float = BURN_IN, log_corrected: bool = True) -> float:
    """Slope of the rightmost particle; optionally adds back the
    logarithmic lag before fitting."""
    times = np.asarray(run.times)
    maxima = np.asarray(run.maxima)
    if log_corrected:
        maxima = maxima + np.array([front_log_correction(s) for s in times])
    slope, _err = slope_estimate(TrajectorySample(times, maxima), burn_in=burn_in)
    return slope


@dataclass(frozen=True)
class GrowthEstimate:
    """Estimates of ``lim (1/t) log Z_t([c t, inf))``.

    ``raw`` is the mean of ``log Z_t / t`` at the final time; ``corrected``
    is the slope of ``log Z_s + log(s) / 2`` over the post burn-in window,
    which removes the Gaussian prefactor of the tail.
    """

    raw: float
    corrected: float
    stderr: float
    target: float
    extinction_fraction: float
    survivors: int
    replicates: int


def sample_grid(t_end: float, n_samples: int) -> np.ndarray:
    return np.linspace(t_end / n_samples, t_end, n_samples)


def killed_run(
    gamma: Optional[float],
    c: float,
    K: float,
    t_end: float,
    rng: np.random.Generator,
    n_samples: int = 60,
    budget: int = PARTICLE_BUDGET,
) -> BRWRun:
    """One walk started at 0 with tail counts beyond ``c t`` on
    :func:`sample_grid`. ``gamma=None`` disables the wall."""
    kill = None
    if gamma is not None:
        if not c > gamma:
            raise ValueError(f"c={c} must exceed gamma={gamma}")
        kill = KillBoundary(K, gamma)
    return simulate_brw(0.0, t_end, rng, kill=kill, sample_times=sample_grid(t_end, n_samples), tail_speed=c, budget=budget)


def growth_from_runs(runs: Sequence[BRWRun], c: float, burn_in: float = BURN_IN) -> GrowthEstimate:
    """Pool :func:`killed_run` results, conditioning on survival."""
    survivors = [r for r in runs if not r.extinct]
    if not survivors:
        raise Extinct(f"all {len(runs)} replicates died out")
    grid = np.asarray(survivors[0].times)
    t_end = grid[-1]
    with np.errstate(divide="ignore"):
        logs = np.stack([np.log(np.asarray(r.tail_counts, dtype=float)) for r in survivors])
    finite = np.all(np.isfinite(logs), axis=0)
    final = logs[:, -1]
    raw = float(np.mean(final[np.isfinite(final)]) / t_end) if np.any(np.isfinite(final)) else math.nan
    corrected = stderr = math.nan
    if finite.sum() >= 10:
        mean_log = logs[:, finite].mean(axis=0) + 0.5 * np.log(grid[finite])
        try:
            corrected, stderr = slope_estimate(TrajectorySample(grid[finite], mean_log), burn_in=burn_in)
        except InsufficientData:
            pass
    return GrowthEstimate(
        raw=raw,
        corrected=corrected,
        stderr=stderr,
        target=growth_exponent(c),
        extinction_fraction=1.0 - len(survivors) / len(runs),
        survivors=len(survivors),
        replicates=len(runs),
    )


def killed_growth_exponent(
    gamma: Optional[float],
    c: float,
    K: float,
    t_end: float,
    streams: Sequence[RngStream],
    n_samples: int = 60,
    burn_in: float = BURN_IN,
    budget: int = PARTICLE_BUDGET,
) -> GrowthEstimate:
    """Monte Carlo growth exponent of the killed walk beyond ``c t``.

    Extinct replicates are discarded and counted in ``extinction_fraction``.
    """
    runs = [killed_run(gamma, c, K, t_end, as_generator(s), n_samples, budget) for s in streams]
    est = growth_from_runs(runs, c, burn_in)
    log.info("killed BRW gamma=%s c=%g K=%g: raw=%.4f corrected=%.4f target=%.4f",
             gamma, c, K, est.raw, est.corrected, est.target)
    return est


# --------------------------------------------------------------------------- #
#  Couplings on a shared event stream
# --------------------------------------------------------------------------- #
@dataclass
class CoupledDPEP:
    dpep: DPEPState
    brw_positions: np.ndarray
    check_times: List[float]
    contained: List[bool]


def coupled_dpep_brw(
    params: SystemParams,
    x0: float,
    t_end: float,
    rng: np.random.Generator,
    check_times: Sequence[float] = (),
    budget: int = PARTICLE_BUDGET,
) -> CoupledDPEP:
    """Grow a branching walk and, inside it, the delta process.

    Every walk particle branches at rate 1; a birth also happens in the
    delta process exactly when the parent is still one of its types. The
    delta process therefore has its own law, and each of its types is a walk
    particle.
    """
    dpep = DPEPState.start([x0], params)
    positions = [x0]
    checks = sorted(float(s) for s in check_times)
    contained: List[bool] = []
    t, k = 0.0, 0
    while True:
        t_next = t + rng.exponential(1.0 / len(positions))
        while k < len(checks) and checks[k] <= min(t_next, t_end):
            contained.append(bool(np.all(np.isin(dpep.positions(), positions))))
            k += 1
        if t_next >= t_end:
            break
        t = t_next
        parent = positions[int(rng.integers(len(positions)))]
        child = parent + rng.uniform(-1.0, 1.0)
        positions.append(child)
        if dpep.contains(parent) and not dpep.contains(child):
            dpep.insert(child)
        if len(positions) > budget:
            raise BudgetExceeded(f"coupled walk exceeded {budget} particles at t={t:.4g}", partial=dpep)
    dpep.clock = t_end
    return CoupledDPEP(dpep, np.asarray(positions), checks[:k], contained)


@dataclass
class CoupledKilled:
    times: np.ndarray
    free_counts: np.ndarray
    killed_counts: np.ndarray


def coupled_killed_brw(
    kill: KillBoundary,
    t_end: float,
    rng: np.random.Generator,
    sample_times: Sequence[float],
    budget: int = PARTICLE_BUDGET,
) -> CoupledKilled:
    """A free walk and its killed sub-walk from one event stream.

    A particle belongs to the killed walk when its parent did at its birth;
    it is alive there while it is right of the wall.
    """
    positions = [0.0]
    member = [True]
    grid = sorted(float(s) for s in sample_times)
    free, killed = [], []

    def snapshot(s: float) -> None:
        arr = np.asarray(positions)
        free.append(arr.size)
        killed.append(int(np.count_nonzero(np.asarray(member) & (arr > kill.at(s)))))

    t, k = 0.0, 0
    while True:
        t_next = t + rng.exponential(1.0 / len(positions))
        while k < len(grid) and grid[k] <= min(t_next, t_end):
            snapshot(grid[k])
            k += 1
        if t_next >= t_end:
            break
        t = t_next
        i = int(rng.integers(len(positions)))
        positions.append(positions[i] + rng.uniform(-1.0, 1.0))
        member.append(member[i] and positions[i] > kill.at(t))
        if len(positions) > budget:
            raise BudgetExceeded(f"coupled walk exceeded {budget} particles at t={t:.4g}")
    return CoupledKilled(np.asarray(grid[:k]), np.asarray(free), np.asarray(killed))
