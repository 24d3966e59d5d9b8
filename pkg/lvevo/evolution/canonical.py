"""Small-mutation limit of the prey evolution process.

Run on the time scale ``t / epsilon`` the resident prey trait follows the
deterministic path

    dy/dt = CANONICAL_DRIFT * N(y)

where ``N`` is :func:`lvevo.lv.prey.normal_vector`. A successful mutant moves
the resident along ``N`` by ``4 / (3 pi)`` on average (mean projection of the
unit half-disk) and half of all mutants succeed, which gives the constant.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from lvevo.core.config import CANONICAL_DRIFT, ODE_ATOL, ODE_RTOL
from lvevo.errors import NotViable, StiffnessError
from lvevo.evolution.prey_ep import PreyEPRun
from lvevo.lv.prey import is_viable, normal_vector
from lvevo.lv.traits import PreyTrait

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CanonicalPath:
    times: np.ndarray
    traits: np.ndarray  # shape (len(times), 2): (alpha, beta)

    def at(self, grid) -> np.ndarray:
        """Linear interpolation of both coordinates on ``grid``."""
        grid = np.asarray(grid, dtype=float)
        return np.column_stack([np.interp(grid, self.times, self.traits[:, k]) for k in range(2)])


def canonical_ode(
    y0: PreyTrait,
    delta: float,
    t_end: float,
    times: Optional[Sequence[float]] = None,
) -> CanonicalPath:
    if not is_viable(y0, delta):
        raise NotViable(f"start {y0.as_tuple()} is outside the viable region")

    def rhs(_t, y):
        return CANONICAL_DRIFT * normal_vector(PreyTrait(y[0], y[1]), delta)

    t_eval = np.linspace(0.0, t_end, 201) if times is None else np.asarray(times, dtype=float)
    sol = solve_ivp(rhs, (0.0, t_end), y0.as_tuple(), t_eval=t_eval, rtol=ODE_RTOL, atol=ODE_ATOL)
    if sol.status < 0:
        raise StiffnessError(sol.message)
    traits = sol.y.T
    for a, b in traits:
        # the flow cannot leave the viable region; a failure here is a bug
        if not is_viable(PreyTrait(a, b), delta):
            raise NotViable(f"canonical path left the viable region at ({a}, {b})")
    return CanonicalPath(sol.t, traits)


def rescaled_mean_path(runs: Sequence[PreyEPRun], epsilon: float, grid) -> np.ndarray:
    """Seed average of ``Y1(t / epsilon)`` on ``grid``."""
    grid = np.asarray(grid, dtype=float)
    stacked = np.stack([run.y1_at(grid / epsilon) for run in runs])
    return stacked.mean(axis=0)


def sup_distance(path: np.ndarray, reference: CanonicalPath, grid) -> float:
    """Largest Euclidean gap between ``path`` and ``reference`` on ``grid``."""
    return float(np.max(np.linalg.norm(np.asarray(path) - reference.at(grid), axis=1)))
