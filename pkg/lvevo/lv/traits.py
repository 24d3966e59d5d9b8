"""Trait and equilibrium value types.

Prey carry ``(alpha, beta)``: how exposed they are to the predator and their
birth rate. Predators carry ``(alpha, delta)``: consumption and death rate.
A predator's characteristic ratio is ``ell = delta / alpha``; coexisting
predators always form a prefix of the list sorted by increasing ``ell``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import ClassVar, FrozenSet, Sequence, Tuple

import numpy as np


@dataclass(frozen=True)
class PreyTrait:
    alpha: float
    beta: float

    ABSENT: ClassVar["PreyTrait"]

    def __post_init__(self) -> None:
        absent = self.alpha == 0 and self.beta == 0
        if not absent and not (self.alpha > 0 and self.beta > 0):
            raise ValueError(f"prey trait must be positive, got ({self.alpha}, {self.beta})")

    @property
    def is_absent(self) -> bool:
        return self.alpha == 0 and self.beta == 0

    def as_tuple(self) -> Tuple[float, float]:
        return (self.alpha, self.beta)


# (0, 0) marks an empty prey slot.
PreyTrait.ABSENT = PreyTrait(0.0, 0.0)


@dataclass(frozen=True)
class PredatorTrait:
    alpha: float
    delta: float

    def __post_init__(self) -> None:
        if not (self.alpha > 0 and self.delta > 0):
            raise ValueError(f"predator trait must be positive, got ({self.alpha}, {self.delta})")

    @property
    def ell(self) -> float:
        return self.delta / self.alpha


@dataclass(frozen=True)
class SystemParams:
    """Fixed part of the system: prey birth rate and, when the predator does
    not evolve, its death rate."""

    beta: float
    delta: float = 1.0

    def __post_init__(self) -> None:
        if not self.beta > 1:
            raise ValueError(f"beta must exceed 1 (r = beta - 1 > 0), got {self.beta}")
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")

    @property
    def r(self) -> float:
        return self.beta - 1.0

    @classmethod
    def from_r(cls, r: float, delta: float = 1.0) -> "SystemParams":
        return cls(beta=1.0 + r, delta=delta)


def _positive_support(values: Sequence[float]) -> FrozenSet[int]:
    return frozenset(i for i, x in enumerate(values) if x > 0)


@dataclass(frozen=True)
class EquilibriumVector:
    """Densities of a fixed point of the Lotka-Volterra system.

    ``prey_support`` / ``predator_support`` are the indices with strictly
    positive density.
    """

    prey_densities: Tuple[float, ...]
    predator_densities: Tuple[float, ...]
    prey_support: FrozenSet[int] = field(init=False)
    predator_support: FrozenSet[int] = field(init=False)

    def __post_init__(self) -> None:
        prey = tuple(float(x) for x in self.prey_densities)
        pred = tuple(float(x) for x in self.predator_densities)
        if any(x < 0 for x in prey + pred):
            raise ValueError(f"negative density in equilibrium {prey + pred}")
        if sum(prey) > 1.0 + 1e-12:
            raise ValueError(f"prey densities sum to {sum(prey)} > 1")
        object.__setattr__(self, "prey_densities", prey)
        object.__setattr__(self, "predator_densities", pred)
        object.__setattr__(self, "prey_support", _positive_support(prey))
        object.__setattr__(self, "predator_support", _positive_support(pred))

    def as_array(self) -> np.ndarray:
        """State vector ``(u_1..u_M, v_1..v_N)`` in integrator order."""
        return np.array(self.prey_densities + self.predator_densities)

    @property
    def size(self) -> int:
        return len(self.prey_densities) + len(self.predator_densities)
