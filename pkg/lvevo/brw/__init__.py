"""Branching random walks, the branching-selection toy model and the rate
function that fixes their speeds."""

from lvevo.brw.rates import phi, rate_function, solve_speed_a, solve_speed_b
from lvevo.brw.toy import simulate_toy
from lvevo.brw.walk import KillBoundary, killed_growth_exponent, simulate_brw

__all__ = [
    "KillBoundary",
    "killed_growth_exponent",
    "phi",
    "rate_function",
    "simulate_brw",
    "simulate_toy",
    "solve_speed_a",
    "solve_speed_b",
]
