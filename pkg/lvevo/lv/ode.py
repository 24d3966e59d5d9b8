"""Numerical integration of the Lotka-Volterra system.

This is the verification oracle for the closed forms in :mod:`lvevo.lv.prey`
and :mod:`lvevo.lv.predator`; the evolution processes never call it.

With ``M`` prey of densities ``u`` and ``N`` predators of densities ``v``::

    du_i/dt = u_i * (beta_i * (1 - sum_k u_k) - 1 - sum_j alpha_ij v_j)
    dv_j/dt = v_j * (sum_i alpha_ij u_i - delta_j - v_j)
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from lvevo.core.config import DENSITY_FLOOR, ODE_ATOL, ODE_RTOL
from lvevo.errors import DomainError, StiffnessError
from lvevo.lv.traits import PredatorTrait, PreyTrait, SystemParams

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class LVSystem:
    """Coefficients of one Lotka-Volterra system.

    ``alphas[i, j]`` is the rate at which predator ``j`` consumes prey ``i``.
    """

    betas: np.ndarray
    alphas: np.ndarray
    deltas: np.ndarray

    def __post_init__(self) -> None:
        betas = np.asarray(self.betas, dtype=float).reshape(-1)
        deltas = np.asarray(self.deltas, dtype=float).reshape(-1)
        alphas = np.asarray(self.alphas, dtype=float).reshape(betas.size, deltas.size)
        object.__setattr__(self, "betas", betas)
        object.__setattr__(self, "deltas", deltas)
        object.__setattr__(self, "alphas", alphas)

    @classmethod
    def from_prey(cls, preys: Sequence[PreyTrait], delta: float) -> "LVSystem":
        """Several prey types, one fixed predator."""
        return cls(
            betas=np.array([y.beta for y in preys]),
            alphas=np.array([[y.alpha] for y in preys]),
            deltas=np.array([delta]),
        )

    @classmethod
    def from_predators(cls, predators: Sequence[PredatorTrait], params: SystemParams) -> "LVSystem":
        """One fixed prey, several predator types."""
        return cls(
            betas=np.array([params.beta]),
            alphas=np.array([[x.alpha for x in predators]]),
            deltas=np.array([x.delta for x in predators]),
        )

    @property
    def n_prey(self) -> int:
        return self.betas.size

    @property
    def n_predators(self) -> int:
        return self.deltas.size

    def rhs(self, state: np.ndarray) -> np.ndarray:
        x = np.maximum(np.asarray(state, dtype=float), 0.0)
        u, v = x[: self.n_prey], x[self.n_prey :]
        du = u * (self.betas * (1.0 - u.sum()) - 1.0 - self.alphas @ v)
        dv = v * (self.alphas.T @ u - self.deltas - v)
        return np.concatenate([du, dv])


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # shape (len(times), M + N)

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def in_gamma(state: np.ndarray, n_prey: int) -> bool:
    """True when densities are nonnegative and prey sum to at most one."""
    state = np.asarray(state, dtype=float)
    return bool(np.all(state >= 0) and state[:n_prey].sum() <= 1.0)


def integrate_lv(
    initial: Sequence[float],
    system: LVSystem,
    t_end: float,
    times: Optional[Sequence[float]] = None,
    rtol: float = ODE_RTOL,
    atol: float = ODE_ATOL,
    max_step: float = np.inf,
) -> Trajectory:
    """Integrate the system from ``initial`` up to ``t_end``.

    Uses the Dormand-Prince 4(5) pair with adaptive steps. Densities are read
    through ``max(x, 0)`` by the right-hand side and values below
    ``DENSITY_FLOOR`` are reported as exactly zero. When ``times`` is given the
    trajectory is sampled there, otherwise at the accepted steps.
    """
    y0 = np.asarray(initial, dtype=float)
    if y0.size != system.n_prey + system.n_predators:
        raise ValueError(f"state has {y0.size} entries, system needs {system.n_prey + system.n_predators}")
    if not in_gamma(y0, system.n_prey):
        raise DomainError(f"initial state {y0} is outside the invariant region")

    t_eval = None if times is None else np.asarray(times, dtype=float)
    sol = solve_ivp(
        lambda _t, y: system.rhs(y),
        (0.0, float(t_end)),
        y0,
        method="RK45",
        t_eval=t_eval,
        rtol=rtol,
        atol=atol,
        max_step=max_step,
    )
    if sol.status < 0:
        raise StiffnessError(f"integration stopped at t={sol.t[-1]:.6g}: {sol.message}")
    states = sol.y.T.copy()
    states[states < DENSITY_FLOOR] = 0.0
    log.debug("integrated %d-dim LV system to t=%g in %d evaluations", y0.size, t_end, sol.nfev)
    return Trajectory(times=sol.t, states=states)


def long_run_state(initial: Sequence[float], system: LVSystem, t_end: float = 2000.0) -> np.ndarray:
    """State reached after integrating for ``t_end`` (the oracle's limit)."""
    return integrate_lv(initial, system, t_end, times=[t_end]).final


def support_of(state: np.ndarray, tol: float = 1e-6) -> frozenset:
    """Indices whose density exceeds ``tol``."""
    return frozenset(int(i) for i in np.flatnonzero(np.asarray(state) > tol))
