"""Closed-form equilibria, viability and invasion outcomes.

``preys`` is a ``;``-separated list of ``alpha,beta`` pairs; with two or
more, the last one invades the others. ``predators`` is a list of
``alpha,delta`` pairs facing one prey of birth rate ``beta``.
"""

from __future__ import annotations

from typing import Any, Dict

import numpy as np

from lvevo.core.config import ExperimentConfig
from lvevo.errors import ConfigError, DegenerateTie
from lvevo.experiments._common import float_list, pair_list
from lvevo.lv.predator import saturated_predator_equilibrium
from lvevo.lv.prey import (
    classify_prey_outcome,
    invadability_curvature,
    invadability_table,
    is_viable,
    normal_vector,
    one_prey_equilibrium,
    prey_only_equilibrium,
)
from lvevo.lv.traits import PredatorTrait, PreyTrait, SystemParams
from lvevo.store_results import ExperimentResult, Table

name = "equilibrium"
description = "Equilibria and viability of given prey or predator traits; invadability curves around one prey."
defaults: Dict[str, Any] = {
    "preys": "2,4",
    "predators": "",
    "delta": 1.0,
    "beta": 2.0,
    "alpha_range": "1.2,3.0",
    "points": 37,
}


def _prey_row(y: PreyTrait, delta: float) -> Dict[str, Any]:
    row: Dict[str, Any] = {"alpha": y.alpha, "beta": y.beta, "viable": is_viable(y, delta)}
    if row["viable"]:
        eq = one_prey_equilibrium(y, delta)
        row["sigma"] = [eq.prey_densities[0], eq.predator_densities[0]]
        row["normal"] = normal_vector(y, delta).tolist()
        row["curvature"] = invadability_curvature(y, delta)
    elif y.beta > 1:
        row["prey_only_density"] = prey_only_equilibrium(y)
    return row


def run(cfg: ExperimentConfig) -> ExperimentResult:
    p = cfg.params
    delta = float(p["delta"])
    preys = [PreyTrait(a, b) for a, b in pair_list(p.get("preys"), "preys")]
    predators = [PredatorTrait(a, d) for a, d in pair_list(p.get("predators"), "predators")]
    if not preys and not predators:
        raise ConfigError("preys", "give at least one prey or predator trait")
    summary: Dict[str, Any] = {}
    tables: Dict[str, Table] = {}

    if preys:
        summary["prey"] = [_prey_row(y, delta) for y in preys]
        if len(preys) >= 2:
            if len(preys) > 3:
                raise ConfigError("preys", "at most two residents and one invader")
            try:
                outcome = classify_prey_outcome(preys[:-1], preys[-1], delta)
                summary["outcome"] = {
                    "rule": outcome.rule,
                    "survivors": [list(y.as_tuple()) for y in outcome.survivors],
                    "predator": outcome.predator,
                    "densities": list(outcome.equilibrium.prey_densities + outcome.equilibrium.predator_densities),
                }
            except DegenerateTie as exc:
                summary["outcome"] = {"rule": "tie", "detail": str(exc)}
        if is_viable(preys[0], delta):
            lo, hi = float_list(p.get("alpha_range"), "alpha_range")
            rows = invadability_table(preys[0], delta, np.linspace(lo, hi, int(p["points"])))
            tables["invadability"] = Table(
                ("alpha", "g", "h", "boundary"), [(r["alpha"], r["g"], r["h"], r["boundary"]) for r in rows]
            )

    if predators:
        params = SystemParams(beta=float(p["beta"]))
        ordered, eq = saturated_predator_equilibrium(predators, params)
        summary["predators"] = {
            "order": [[x.alpha, x.delta] for x in ordered],
            "coexisting": len(eq.predator_support),
            "prey_density": eq.prey_densities[0],
            "densities": list(eq.predator_densities),
        }
    return ExperimentResult(summary, tables)


func = run