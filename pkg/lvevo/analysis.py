"""Estimators for the long-run quantities of the evolution processes.

All functions are pure: they take arrays (or event times) and return
numbers, so every estimate can be recomputed from stored CSV files.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np
from scipy import stats

from lvevo.core.config import BURN_IN
from lvevo.errors import DomainError, InsufficientData

MIN_SLOPE_POINTS = 10
MIN_SCALING_POINTS = 4
MIN_DISPERSION_EVENTS = 20


@dataclass(frozen=True)
class TrajectorySample:
    times: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if times.shape != values.shape or times.ndim != 1:
            raise ValueError(f"times {times.shape} and values {values.shape} must be equal-length 1-D arrays")
        if np.any(np.diff(times) <= 0):
            raise ValueError("times must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.times.size

    def after_burn_in(self, fraction: float) -> "TrajectorySample":
        """Points with ``time >= t0 + fraction * (t_end - t0)``."""
        if not 0 <= fraction < 1:
            raise ValueError(f"burn-in fraction must be in [0, 1), got {fraction}")
        if not len(self):
            return self
        cut = self.times[0] + fraction * (self.times[-1] - self.times[0])
        keep = self.times >= cut
        return TrajectorySample(self.times[keep], self.values[keep])


def slope_estimate(sample: TrajectorySample, burn_in: float = BURN_IN) -> Tuple[float, float]:
    """Least-squares slope after burn-in with its HC1 robust standard error."""
    tail = sample.after_burn_in(burn_in)
    n = len(tail)
    if n < MIN_SLOPE_POINTS:
        raise InsufficientData(f"{n} points after burn-in, need {MIN_SLOPE_POINTS}")
    t = tail.times - tail.times.mean()
    sxx = float(np.dot(t, t))
    slope = float(np.dot(t, tail.values - tail.values.mean()) / sxx)
    resid = tail.values - tail.values.mean() - slope * t
    var = float(np.dot(t * t, resid * resid)) / (sxx * sxx) * n / (n - 2)
    return slope, math.sqrt(var)


@dataclass(frozen=True)
class ScalingFit:
    exponent: float
    intercept: float
    stderr: float
    ci_low: float
    ci_high: float
    n: int


def scaling_regression(pairs: Sequence[Tuple[float, float]], level: float = 0.95) -> ScalingFit:
    """Exponent ``p`` in ``statistic ~ C * eps ** p`` by log-log regression."""
    if len(pairs) < MIN_SCALING_POINTS:
        raise InsufficientData(f"{len(pairs)} (eps, statistic) pairs, need {MIN_SCALING_POINTS}")
    eps, stat = (np.asarray(col, dtype=float) for col in zip(*pairs))
    if np.any(eps <= 0) or np.any(stat <= 0):
        raise DomainError("log-log regression needs positive eps and statistics")
    fit = stats.linregress(np.log(eps), np.log(stat))
    half = stats.t.ppf(0.5 + level / 2, len(pairs) - 2) * fit.stderr
    return ScalingFit(
        exponent=float(fit.slope),
        intercept=float(fit.intercept),
        stderr=float(fit.stderr),
        ci_low=float(fit.slope - half),
        ci_high=float(fit.slope + half),
        n=len(pairs),
    )


@dataclass(frozen=True)
class SpacingProfile:
    """Rescaled type distribution in rank order ``j = 1..N``.

    ``abscissae[j]`` is the rescaled distance of type ``j`` from the least
    fit type and ``masses[j]`` the rescaled number of types below it; both
    are nonincreasing in ``j``. ``fit_scale * exp(fit_rate * x)`` is a least
    squares fit of the positive masses and ``fit_residual`` its largest
    absolute error (``nan`` with fewer than two positive masses).
    """

    abscissae: np.ndarray
    masses: np.ndarray
    fit_rate: float
    fit_scale: float
    fit_residual: float

    def rows(self):
        return list(zip(self.abscissae.tolist(), self.masses.tolist()))


def spacing_profile(values: Sequence[float], unit_mass: float, unit_length: float = 1.0) -> SpacingProfile:
    """Profile ``((v_j - v_min) / unit_length, unit_mass * (N - j))`` of the
    decreasing trait values ``v_1 > ... > v_N``."""
    v = np.sort(np.asarray(values, dtype=float))[::-1]
    if v.size < 2:
        raise InsufficientData("a spacing profile needs at least two types")
    abscissae = (v - v[-1]) / unit_length
    masses = unit_mass * np.arange(v.size - 1, -1, -1, dtype=float)
    positive = masses > 0
    rate = scale = residual = math.nan
    if positive.sum() >= 2 and np.ptp(abscissae[positive]) > 0:
        rate, log_scale = np.polyfit(abscissae[positive], np.log(masses[positive]), 1)
        scale = math.exp(log_scale)
        residual = float(np.max(np.abs(masses - scale * np.exp(rate * abscissae))))
    return SpacingProfile(abscissae, masses, float(rate), float(scale), float(residual))


def apep_profile(alphas: Sequence[float], epsilon: float) -> SpacingProfile:
    """``(d_j / eps, eps (N - j))`` with ``d_j = alpha_j - alpha_min``."""
    return spacing_profile(alphas, unit_mass=epsilon, unit_length=epsilon)


def dpep_profile(xs: Sequence[float]) -> SpacingProfile:
    """``(X_j - X_min, (N - j) exp(-X_min))``."""
    return spacing_profile(xs, unit_mass=math.exp(-min(xs)))


EventTimes = Union[Sequence[float], np.ndarray]


def dispersion_test(event_times: Sequence[EventTimes], horizon: float, windows: int = 1) -> float:
    """Variance-to-mean ratio of event counts in equal windows of ``[0, horizon]``.

    ``event_times`` holds one array per replicate. With several replicates
    each window is compared across replicates and the ratios pooled as
    ``sum var / sum mean``, which stays near 1 for a nonhomogeneous Poisson
    process. A single replicate is compared across its own windows.
    """
    if windows < 1:
        raise ValueError("windows must be >= 1")
    edges = np.linspace(0.0, horizon, windows + 1)
    counts = np.array([np.histogram(np.asarray(ts, dtype=float), bins=edges)[0] for ts in event_times])
    total = int(counts.sum())
    if total == 0:
        raise InsufficientData("no events in the window")
    if total < MIN_DISPERSION_EVENTS:
        raise InsufficientData(f"{total} events, need {MIN_DISPERSION_EVENTS}")
    if counts.shape[0] == 1:
        flat = counts[0]
        if flat.size < 2:
            raise InsufficientData("one replicate needs at least two windows")
        return float(flat.var(ddof=1) / flat.mean())
    return float(counts.var(axis=0, ddof=1).sum() / counts.mean(axis=0).sum())
