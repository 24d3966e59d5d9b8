"""Stochastic trait-evolution processes and their deterministic limit."""

from lvevo.evolution.apep import APEPState, apep_step, run_apep
from lvevo.evolution.canonical import canonical_ode
from lvevo.evolution.dpep import DPEPState, dpep_step, run_dpep
from lvevo.evolution.events import EVENT_FIELDS, EventLog, EventRecord
from lvevo.evolution.predator_ep import PredatorEPState, predator_ep_step, run_predator_ep
from lvevo.evolution.prey_ep import PreyEPState, coexistence_probability, prey_ep_step, run_prey_ep

__all__ = [
    "APEPState",
    "DPEPState",
    "EVENT_FIELDS",
    "EventLog",
    "EventRecord",
    "PredatorEPState",
    "PreyEPState",
    "apep_step",
    "canonical_ode",
    "coexistence_probability",
    "dpep_step",
    "predator_ep_step",
    "prey_ep_step",
    "run_apep",
    "run_dpep",
    "run_predator_ep",
    "run_prey_ep",
]
