"""Large-deviation rate of the branching random walk and its two speeds.

Particles branch at rate 1 and displace children by Uniform[-1, 1], so the
expected number of particles beyond ``x t`` at time ``t`` decays like
``exp(t * (1 + rate_function(x)))`` with::

    phi(theta)      = sinh(theta) / theta
    rate_function(x) = -( sup_{theta > 0} (theta x - phi(theta)) + 1 )

``rate_function`` is 0 at 0, strictly decreasing and concave. The fittest
particle moves at ``a`` with ``rate_function(a) = -1`` and the bulk of the
delta process at ``b`` with ``rate_function(b) = -1 + b``.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Tuple

from scipy.optimize import bisect, minimize_scalar, newton

from lvevo.core.config import NEWTON_TOL, PHI_SERIES_CUTOFF, SPEED_XTOL, THETA_BRACKET
from lvevo.errors import OutOfDomain

# Cancellation in the closed-form derivatives sets in much earlier than in phi.
DERIVATIVE_SERIES_CUTOFF = 1e-2


def phi(theta: float) -> float:
    t = abs(theta)
    if t < PHI_SERIES_CUTOFF:
        t2 = t * t
        return 1.0 + t2 / 6.0 + t2 * t2 / 120.0
    return math.sinh(t) / t


def phi_prime(theta: float) -> float:
    t = abs(theta)
    if t < DERIVATIVE_SERIES_CUTOFF:
        value = t / 3.0 + t**3 / 30.0 + t**5 / 840.0
    else:
        value = (t * math.cosh(t) - math.sinh(t)) / (t * t)
    return math.copysign(value, theta)


def phi_second(theta: float) -> float:
    t = abs(theta)
    if t < DERIVATIVE_SERIES_CUTOFF:
        return 1.0 / 3.0 + t * t / 10.0 + t**4 / 168.0
    return ((t * t + 2.0) * math.sinh(t) - 2.0 * t * math.cosh(t)) / t**3


def legendre(x: float) -> Tuple[float, float]:
    """``(sup_theta (theta x - phi(theta)), argmax)`` for ``0 <= x < 1``.

    At ``x == 0`` the supremum ``-1`` is approached as ``theta -> 0``.
    """
    if x >= 1.0:
        raise OutOfDomain(f"speed {x} >= 1 exceeds the largest displacement")
    if x < 0.0:
        raise OutOfDomain(f"rate function is only used for x >= 0, got {x}")
    if x == 0.0:
        return -1.0, 0.0
    res = minimize_scalar(
        lambda t: phi(t) - t * x,
        bounds=THETA_BRACKET,
        method="bounded",
        options={"xatol": 1e-10},
    )
    theta = float(res.x)
    # the objective is concave, so Newton on the first-order condition converges from here
    try:
        polished = newton(lambda t: phi_prime(t) - x, theta, fprime=phi_second, tol=NEWTON_TOL, maxiter=50)
        if THETA_BRACKET[0] <= polished <= THETA_BRACKET[1]:
            theta = float(polished)
    except RuntimeError:
        pass
    return theta * x - phi(theta), theta


def rate_function(x: float) -> float:
    value, _theta = legendre(x)
    return -(value + 1.0)


def growth_exponent(x: float) -> float:
    """``1 + rate_function(x)``: exponential growth rate of the count beyond ``x t``."""
    return 1.0 + rate_function(x)


def tilt_at(x: float) -> float:
    """Maximising ``theta`` at speed ``x``."""
    return legendre(x)[1]


@lru_cache(maxsize=None)
def solve_speed_a() -> float:
    """Root of ``rate_function(x) = -1`` in ``(0, 1)``."""
    return float(bisect(lambda x: rate_function(x) + 1.0, 1e-6, 1.0 - 1e-9, xtol=SPEED_XTOL))


@lru_cache(maxsize=None)
def solve_speed_b() -> float:
    """Root of ``rate_function(x) = -1 + x`` in ``(0, 1)``."""
    return float(bisect(lambda x: rate_function(x) + 1.0 - x, 1e-6, 1.0 - 1e-9, xtol=SPEED_XTOL))


def speed_residuals() -> Tuple[float, float]:
    a, b = solve_speed_a(), solve_speed_b()
    return rate_function(a) + 1.0, rate_function(b) + 1.0 - b


def front_log_correction(t: float) -> float:
    """``3 / (2 theta_a) * log t``: how far the fittest particle lags ``a t``."""
    if t <= 1.0:
        return 0.0
    return 3.0 / (2.0 * tilt_at(solve_speed_a())) * math.log(t)
