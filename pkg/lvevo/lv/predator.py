"""Predator-side algebra: one fixed prey, many predator types.

Sorted by increasing characteristic ratio ``ell = delta / alpha``, the first
``k`` predators coexist exactly when::

    sum_{j<=k} alpha_j**2 * (ell_k - ell_j) < r - beta * ell_k

and the condition is monotone in ``k``, so the coexisting set is always a
prefix. The two special cases used by the evolution processes (all deaths
equal to one, all consumption rates equal to one) have their own vectorised
checks.
"""

from __future__ import annotations

import math
from typing import List, Sequence, Tuple

import numpy as np

from lvevo.core.config import ROUNDING_SLACK
from lvevo.errors import DomainError, NotCoexisting
from lvevo.lv.traits import EquilibriumVector, PredatorTrait, SystemParams


def sort_by_ell(predators: Sequence[PredatorTrait]) -> List[PredatorTrait]:
    """Increasing ``ell``; ties go to the larger ``alpha`` first."""
    return sorted(predators, key=lambda x: (x.ell, -x.alpha))


def predator_equilibrium(predators: Sequence[PredatorTrait], params: SystemParams) -> EquilibriumVector:
    """``(sigma_0, sigma_1..sigma_k)`` for the given predators, assumed sorted.

    With no predators this is the prey-only density ``r / beta``.
    """
    if not predators:
        return EquilibriumVector((params.r / params.beta,), ())
    alpha = np.array([x.alpha for x in predators])
    delta = np.array([x.delta for x in predators])
    sigma0 = (params.r + np.dot(alpha, delta)) / (params.beta + np.dot(alpha, alpha))
    sigma = alpha * sigma0 - delta
    if np.any(sigma < -ROUNDING_SLACK):
        raise NotCoexisting(f"predators {len(predators)} do not coexist: sigma={sigma}")
    # boundary cases cancel to a few ulps of either sign
    return EquilibriumVector((sigma0,), tuple(np.maximum(sigma, 0.0)))


def _prefix_margins(alpha: np.ndarray, ell: np.ndarray, params: SystemParams) -> np.ndarray:
    # r - beta*ell_k - sum_{j<=k} alpha_j^2 (ell_k - ell_j); positive means the k-prefix coexists
    s2 = np.cumsum(alpha * alpha)
    s1 = np.cumsum(alpha * alpha * ell)
    return params.r - params.beta * ell - (ell * s2 - s1)


def _largest_true(ok: np.ndarray) -> int:
    hits = np.flatnonzero(ok)
    return int(hits[-1]) + 1 if hits.size else 0


def coexisting_prefix(predators: Sequence[PredatorTrait], params: SystemParams) -> int:
    """Number of predators that survive, counted in :func:`sort_by_ell` order."""
    ordered = sort_by_ell(predators)
    if not ordered:
        return 0
    alpha = np.array([x.alpha for x in ordered])
    ell = np.array([x.ell for x in ordered])
    return _largest_true(_prefix_margins(alpha, ell, params) > 0)


def saturated_predator_equilibrium(
    predators: Sequence[PredatorTrait], params: SystemParams
) -> Tuple[List[PredatorTrait], EquilibriumVector]:
    """Sorted predators and the globally attracting equilibrium, with zeros
    for the predators that die out."""
    ordered = sort_by_ell(predators)
    m = coexisting_prefix(ordered, params)
    eq = predator_equilibrium(ordered[:m], params)
    padded = eq.predator_densities + (0.0,) * (len(ordered) - m)
    return ordered, EquilibriumVector(eq.prey_densities, padded)


# --------------------------------------------------------------------------- #
#  Fixed death rate (delta = 1): traits are the consumption rates
# --------------------------------------------------------------------------- #
def _check_decreasing(values: np.ndarray, name: str) -> None:
    if values.size and np.any(np.diff(values) >= 0):
        raise ValueError(f"{name} must be strictly decreasing")


def fixed_delta_margins(alphas: Sequence[float], params: SystemParams) -> np.ndarray:
    """Slack of the fixed-delta condition for every prefix of ``alphas``.

    ``alphas`` is decreasing; prefix ``k`` coexists iff entry ``k-1`` is > 0.
    """
    a = np.asarray(alphas, dtype=float)
    s2 = np.cumsum(a * a)
    s1 = np.cumsum(a)
    return params.r - params.beta / a - (s2 / a - s1)


def fixed_delta_prefix(alphas: Sequence[float], params: SystemParams) -> int:
    return _largest_true(fixed_delta_margins(alphas, params) > 0)


def check_fixed_delta(alphas: Sequence[float], params: SystemParams) -> bool:
    """``sum_j (alpha_j / alpha_N)(alpha_j - alpha_N) < r - beta / alpha_N``."""
    a = np.asarray(alphas, dtype=float)
    if a.size == 0:
        return True
    if np.any(a <= 0):
        raise ValueError("consumption rates must be positive")
    _check_decreasing(a, "alphas")
    a_n = a[-1]
    return bool(np.sum((a / a_n) * (a - a_n)) < params.r - params.beta / a_n)


# --------------------------------------------------------------------------- #
#  Fixed consumption rate (alpha = 1): traits are X = -log(delta)
# --------------------------------------------------------------------------- #
def fixed_alpha_margins(xs: Sequence[float], params: SystemParams) -> np.ndarray:
    """Slack of the fixed-alpha condition for every prefix of decreasing ``xs``.

    Uses ``e^{-X_k} (beta + k) - sum_{j<=k} e^{-X_j} < r``.
    """
    x = np.asarray(xs, dtype=float)
    d = np.exp(-x)
    k = np.arange(1, x.size + 1)
    return params.r - (d * (params.beta + k) - np.cumsum(d))


def fixed_alpha_prefix(xs: Sequence[float], params: SystemParams) -> int:
    return _largest_true(fixed_alpha_margins(xs, params) > 0)


def check_fixed_alpha(xs: Sequence[float], params: SystemParams) -> bool:
    """``e^{-X_N} (beta + sum_j (1 - e^{-(X_j - X_N)})) < r``."""
    x = np.asarray(xs, dtype=float)
    if x.size == 0:
        return True
    _check_decreasing(x, "X")
    x_n = x[-1]
    return bool(math.exp(-x_n) * (params.beta + np.sum(1.0 - np.exp(-(x - x_n)))) < params.r)


def coexistence_guarantee_level(m: int, params: SystemParams) -> float:
    """``-log(r / (beta + m))``.

    If the ``m`` largest log-traits all exceed this level the first ``m``
    types satisfy the fixed-alpha condition whatever else is present.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    return -math.log(params.r / (params.beta + m))


# --------------------------------------------------------------------------- #
#  Lyapunov function
# --------------------------------------------------------------------------- #
def lyapunov_value(state: Sequence[float], equilibrium: EquilibriumVector, params: SystemParams) -> float:
    """``sum_i (x_i - sigma_i log x_i)`` over coordinates with ``sigma_i > 0``
    plus ``sum_i x_i`` over the others.

    ``state`` is ``(u, v_1..v_N)`` in the order of ``equilibrium``.
    """
    x = np.asarray(state, dtype=float)
    sigma = equilibrium.as_array()
    if x.shape != sigma.shape:
        raise ValueError(f"state has shape {x.shape}, equilibrium {sigma.shape}")
    live = sigma > 0
    if np.any(x[live] <= 0):
        raise DomainError("log of a nonpositive density")
    return float(np.sum(x[live] - sigma[live] * np.log(x[live])) + np.sum(x[~live]))


def lyapunov_derivative(
    state: Sequence[float],
    equilibrium: EquilibriumVector,
    predators: Sequence[PredatorTrait],
    params: SystemParams,
) -> float:
    """``dV/dt`` along the flow at ``state``; nonpositive for a saturated
    equilibrium."""
    x = np.asarray(state, dtype=float)
    sigma = equilibrium.as_array()
    u, v = x[0], x[1:]
    alpha = np.array([p.alpha for p in predators])
    delta = np.array([p.delta for p in predators])
    du = params.beta * (1.0 - u) - 1.0 - np.dot(alpha, v)
    dv = alpha * u - delta - v
    # (x_i - sigma_i) * per-capita growth_i sums dV/dt for both kinds of coordinate
    return float((u - sigma[0]) * du + np.dot(v - sigma[1:], dv))
