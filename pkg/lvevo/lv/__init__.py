"""Closed-form Lotka-Volterra algebra and the ODE oracle."""

from lvevo.lv.traits import EquilibriumVector, PredatorTrait, PreyTrait, SystemParams

__all__ = ["EquilibriumVector", "PredatorTrait", "PreyTrait", "SystemParams"]
