"""Prey-side algebra: one fixed predator, one to three prey types.

A resident ``y1`` at its equilibrium ``(sigma_1, sigma_2)`` (prey, predator)
is invaded by ``y`` when the invasion fitness ``F(y1, y)`` is positive. Two
prey coexist when each invades the other; in the ``(alpha, beta)`` plane this
is the wedge ``h(y1, alpha) < beta < g(y1, alpha)`` which is tangent at
``y1``.

The array helpers accept numpy arrays for the invader so Monte Carlo
callers can classify many mutants at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import List, Sequence, Tuple

import numpy as np

from lvevo.errors import DegenerateTie, NotCoexisting, NotViable, Singular
from lvevo.lv.traits import EquilibriumVector, PreyTrait


# --------------------------------------------------------------------------- #
#  Array helpers
# --------------------------------------------------------------------------- #
def one_prey_sigma(alpha, beta, delta):
    denom = beta + alpha * alpha
    return ((beta - 1.0) + alpha * delta) / denom, ((beta - 1.0) * alpha - beta * delta) / denom


def fitness_at(sigma1, sigma2, alpha, beta):
    return beta * (1.0 - sigma1) - 1.0 - alpha * sigma2


def viable_mask(alpha, beta, delta):
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        threshold = alpha / (alpha - delta)
    return (alpha > delta) & (beta > threshold) & (threshold > 1.0)


def _require_live(y: PreyTrait) -> None:
    if y.is_absent:
        raise ValueError("the absent prey sentinel has no algebra")


# --------------------------------------------------------------------------- #
#  Single resident
# --------------------------------------------------------------------------- #
def prey_only_equilibrium(y: PreyTrait) -> float:
    """Prey density without the predator, ``(beta - 1) / beta``."""
    _require_live(y)
    if not y.beta > 1:
        raise NotViable(f"prey with beta={y.beta} <= 1 dies out on its own")
    return (y.beta - 1.0) / y.beta


def is_viable(y: PreyTrait, delta: float) -> bool:
    """True when the predator can invade the prey-only equilibrium of ``y``."""
    if y.is_absent:
        return False
    return bool(viable_mask(y.alpha, y.beta, delta))


def viability_boundary(alpha: float, delta: float) -> float:
    """``alpha / (alpha - delta)``, the lowest viable birth rate at ``alpha``."""
    if not alpha > delta:
        return float("inf")
    return alpha / (alpha - delta)


def one_prey_equilibrium(y: PreyTrait, delta: float) -> EquilibriumVector:
    _require_live(y)
    if not is_viable(y, delta):
        raise NotViable(f"prey {y.as_tuple()} is not viable for delta={delta}")
    s1, s2 = one_prey_sigma(y.alpha, y.beta, delta)
    return EquilibriumVector((s1,), (s2,))


def invasion_fitness(resident: PreyTrait, invader: PreyTrait, delta: float) -> float:
    """Growth rate of a rare ``invader`` at the resident's equilibrium.

    Exactly zero when ``invader == resident``.
    """
    _require_live(resident)
    _require_live(invader)
    if invader == resident:
        return 0.0
    s1, s2 = one_prey_equilibrium(resident, delta).as_array()
    return float(fitness_at(s1, s2, invader.alpha, invader.beta))


def invadability_curves(y1: PreyTrait, alpha: float, delta: float) -> Tuple[float, float]:
    """``(g, h)`` at abscissa ``alpha``.

    Above ``g`` the mutant cannot be invaded back by ``y1``; below ``h`` it
    cannot invade ``y1``. Both equal ``y1.beta`` at ``alpha == y1.alpha``.
    """
    s1, s2 = one_prey_equilibrium(y1, delta).as_array()
    a1, b1 = y1.alpha, y1.beta
    denom = 1.0 + a1 * (alpha - delta)
    if denom == 0.0:
        raise Singular(f"g is undefined at alpha={alpha} (1 + alpha_1 (alpha - delta) = 0)")
    if alpha == a1:
        return b1, b1
    g = ((b1 - 1.0) * alpha**2 + (a1 - b1 * delta) * alpha + b1) / denom
    h = (alpha * s2 + 1.0) / (1.0 - s1)
    return float(g), float(h)


def invadability_curvature(y1: PreyTrait, delta: float, step: float = 1e-3) -> float:
    """Second derivative of ``g - h`` in ``alpha`` at the resident.

    The width of the coexistence wedge grows like ``curvature * dalpha**2 / 2``
    near ``y1``.
    """
    values = []
    for alpha in (y1.alpha - step, y1.alpha, y1.alpha + step):
        g, h = invadability_curves(y1, alpha, delta)
        values.append(g - h)
    return (values[0] - 2.0 * values[1] + values[2]) / step**2


def invadability_table(y1: PreyTrait, delta: float, alphas: Sequence[float]) -> List[dict]:
    """Rows ``{alpha, g, h, boundary}`` for plotting the curves around ``y1``."""
    rows = []
    for alpha in alphas:
        try:
            g, h = invadability_curves(y1, float(alpha), delta)
        except Singular:
            continue
        rows.append({"alpha": float(alpha), "g": g, "h": h, "boundary": viability_boundary(float(alpha), delta)})
    return rows


def normal_vector(y1: PreyTrait, delta: float) -> np.ndarray:
    """Unit normal to the invadability curves at ``y1``, pointing into
    higher birth rates."""
    s1, s2 = one_prey_equilibrium(y1, delta).as_array()
    v = np.array([-s2, 1.0 - s1])
    return v / np.linalg.norm(v)


# --------------------------------------------------------------------------- #
#  Several prey
# --------------------------------------------------------------------------- #
def _interaction(preys: Sequence[PreyTrait], delta: float) -> Tuple[np.ndarray, np.ndarray]:
    """``(r, A)`` of the system written as ``dx/dt = x * (r + A x)``.

    Prey come first, the predator is the last coordinate.
    """
    m = len(preys)
    betas = np.array([y.beta for y in preys])
    alphas = np.array([y.alpha for y in preys])
    r = np.append(betas - 1.0, -delta)
    a = np.zeros((m + 1, m + 1))
    a[:m, :m] = -betas[:, None]
    a[:m, m] = -alphas
    a[m, :m] = alphas
    a[m, m] = -1.0
    return r, a


def two_prey_equilibrium(y1: PreyTrait, y2: PreyTrait, delta: float) -> EquilibriumVector:
    """Interior equilibrium ``(u1, u2, v)`` of two prey and the predator."""
    _require_live(y1)
    _require_live(y2)
    r, a = _interaction([y1, y2], delta)
    try:
        x = np.linalg.solve(a, -r)
    except np.linalg.LinAlgError as exc:
        raise NotCoexisting(f"{y1.as_tuple()} and {y2.as_tuple()}: singular system") from exc
    if not np.all(x > 0):
        raise NotCoexisting(f"{y1.as_tuple()} and {y2.as_tuple()} have no positive equilibrium: {x}")
    return EquilibriumVector((x[0], x[1]), (x[2],))


def _admissible_supports(m: int):
    for size in range(3):
        for prey in combinations(range(m), size):
            for with_predator in (False, True):
                if size == 2 and not with_predator:
                    continue
                yield list(prey) + ([m] if with_predator else [])


def saturated_prey_equilibrium(preys: Sequence[PreyTrait], delta: float) -> EquilibriumVector:
    """The unique equilibrium that no absent type can invade.

    Candidate supports hold at most two prey, and two prey only together with
    the predator. Each candidate is solved on its support; it qualifies when
    the solution is positive there and every absent type has strictly
    negative growth.
    """
    preys = list(preys)
    for y in preys:
        _require_live(y)
    m = len(preys)
    r, a = _interaction(preys, delta)
    found = []
    for support in _admissible_supports(m):
        x = np.zeros(m + 1)
        if support:
            try:
                x_s = np.linalg.solve(a[np.ix_(support, support)], -r[support])
            except np.linalg.LinAlgError:
                continue
            if not np.all(x_s > 0):
                continue
            x[support] = x_s
        growth = r + a @ x
        outside = [i for i in range(m + 1) if i not in support]
        if all(growth[i] < 0 for i in outside):
            found.append(x)
    if len(found) != 1:
        raise DegenerateTie(f"{len(found)} saturated equilibria for {[y.as_tuple() for y in preys]}")
    x = found[0]
    return EquilibriumVector(tuple(x[:m]), (x[m],))


@dataclass(frozen=True)
class OutcomeSupport:
    """Long-run outcome of an invasion.

    ``survivors`` lists the live prey in input order (residents, then the
    invader) and ``equilibrium`` gives their densities and the predator's.
    ``rule`` records which test decided the case.
    """

    survivors: Tuple[PreyTrait, ...]
    predator: bool
    equilibrium: EquilibriumVector
    rule: str

    @property
    def size(self) -> int:
        return len(self.survivors)


def _outcome(survivors: Sequence[PreyTrait], eq: EquilibriumVector, rule: str) -> OutcomeSupport:
    return OutcomeSupport(tuple(survivors), bool(eq.predator_support), eq, rule)


def _signed(value: float) -> bool:
    if value == 0.0:
        raise DegenerateTie("invader lies exactly on an invadability curve")
    return value > 0.0


def _classify_pair(y1: PreyTrait, y2: PreyTrait, delta: float) -> OutcomeSupport:
    forward = _signed(invasion_fitness(y1, y2, delta))
    backward = _signed(invasion_fitness(y2, y1, delta))
    if forward and backward:
        return _outcome((y1, y2), two_prey_equilibrium(y1, y2, delta), "coexist")
    if forward:
        return _outcome((y2,), one_prey_equilibrium(y2, delta), "replace")
    if backward:
        return _outcome((y1,), one_prey_equilibrium(y1, delta), "retain")
    return _from_saturated((y1, y2), delta)


def _classify_triple(y1: PreyTrait, y2: PreyTrait, y3: PreyTrait, delta: float):
    into = [_signed(invasion_fitness(y, y3, delta)) for y in (y1, y2)]
    back = [_signed(invasion_fitness(y3, y, delta)) for y in (y1, y2)]
    if all(into) and not any(back):
        return _outcome((y3,), one_prey_equilibrium(y3, delta), "replace")
    if all(back) and not any(into):
        return _outcome((y1, y2), two_prey_equilibrium(y1, y2, delta), "retain")
    return None


def _from_saturated(preys: Sequence[PreyTrait], delta: float) -> OutcomeSupport:
    eq = saturated_prey_equilibrium(preys, delta)
    survivors = [preys[i] for i in sorted(eq.prey_support)]
    reduced = EquilibriumVector(
        tuple(eq.prey_densities[i] for i in sorted(eq.prey_support)),
        eq.predator_densities,
    )
    return _outcome(survivors, reduced, "saturated")


def classify_prey_outcome(
    residents: Sequence[PreyTrait], invader: PreyTrait, delta: float
) -> OutcomeSupport:
    """Which prey survive once ``invader`` enters a resident community.

    With viable traits the one-resident case is settled by the signs of the
    invasion fitness in both directions. With two residents the invader
    either beats both or loses to both; any other sign pattern, and any
    community containing a non-viable trait, is settled by the saturated
    equilibrium search.
    """
    residents = tuple(residents)
    if not 1 <= len(residents) <= 2:
        raise ValueError(f"expected 1 or 2 residents, got {len(residents)}")
    preys = residents + (invader,)
    for y in preys:
        _require_live(y)
    betas = [y.beta for y in preys]
    if len(set(betas)) != len(betas):
        raise DegenerateTie(f"equal birth rates among {[y.as_tuple() for y in preys]}")

    if all(is_viable(y, delta) for y in preys):
        if len(residents) == 1:
            return _classify_pair(residents[0], invader, delta)
        decided = _classify_triple(residents[0], residents[1], invader, delta)
        if decided is not None:
            return decided
    return _from_saturated(preys, delta)
