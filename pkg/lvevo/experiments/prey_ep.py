"""Prey evolution process on the rescaled time axis ``t * epsilon``."""

from __future__ import annotations

import logging
from typing import Any, Dict

import numpy as np

from lvevo.analysis import dispersion_test
from lvevo.core.config import PREY_EP_CLOCK, ExperimentConfig
from lvevo.core.rng import RngStream
from lvevo.errors import InsufficientData
from lvevo.evolution.canonical import canonical_ode, sup_distance
from lvevo.evolution.prey_ep import run_prey_ep
from lvevo.experiments._common import mean_stderr, run_replicates, series
from lvevo.lv.traits import PreyTrait
from lvevo.store_results import ExperimentResult, ReplicateResult, Table

log = logging.getLogger(__name__)

name = "prey-ep"
description = "Prey EP: time with two prey, coexistence-event dispersion and distance to the canonical path."
replayable = True
defaults: Dict[str, Any] = {
    "alpha0": 2.0,
    "beta0": 4.0,
    "delta": 1.0,
    "epsilon": 0.01,
    "horizon": 2.0,
    "clock": PREY_EP_CLOCK,
    "windows": 1,
    "grid": 41,
}


def _grid(params: Dict[str, Any]) -> np.ndarray:
    return np.linspace(0.0, float(params["horizon"]), int(params["grid"]))


def replicate(params: Dict[str, Any], stream: RngStream) -> ReplicateResult:
    eps = float(params["epsilon"])
    y0 = PreyTrait(float(params["alpha0"]), float(params["beta0"]))
    run = run_prey_ep(y0, float(params["delta"]), eps, float(params["horizon"]) / eps, stream.generator(), clock_mode=params["clock"])
    grid = _grid(params)
    path = run.y1_at(grid / eps)
    events = [t * eps for t in run.state.coexistence_event_times]
    return ReplicateResult(
        summary={
            "mutations": run.state.mutations,
            "coexistence_events": len(events),
            "two_prey_fraction": run.two_prey_fraction,
            "absorbed": run.state.absorbed,
            "predator_lost": not run.state.predator,
        },
        tables={
            "y1_path": series(("time", "alpha", "beta"), grid, path[:, 0], path[:, 1]),
            "coexistence_events": Table(("time",), [(t,) for t in events]),
        },
        events=run.events,
    )


def run(cfg: ExperimentConfig) -> ExperimentResult:
    p = cfg.params
    reps = run_replicates(cfg, replicate)
    grid = _grid(p)
    paths = np.stack([np.array([row[1:] for row in r.tables["y1_path"].rows]) for r in reps])
    mean_path = paths.mean(axis=0)
    y0 = PreyTrait(float(p["alpha0"]), float(p["beta0"]))
    canonical = canonical_ode(y0, float(p["delta"]), float(p["horizon"]), times=grid)
    target = canonical.at(grid)
    gap = sup_distance(mean_path, canonical, grid)

    event_times = [[row[0] for row in r.tables["coexistence_events"].rows] for r in reps]
    try:
        dispersion = dispersion_test(event_times, float(p["horizon"]), int(p["windows"]))
    except InsufficientData as exc:
        log.warning("no dispersion index: %s", exc)
        dispersion = None
    two_prey, two_prey_err = mean_stderr([r.summary["two_prey_fraction"] for r in reps])
    summary = {
        "replicates": len(reps),
        "two_prey_fraction": two_prey,
        "two_prey_fraction_stderr": two_prey_err,
        "two_prey_fraction_max": max(r.summary["two_prey_fraction"] for r in reps),
        "coexistence_events": sum(r.summary["coexistence_events"] for r in reps),
        "dispersion_index": dispersion,
        "canonical_sup_distance": gap,
        "absorbed": sum(bool(r.summary["absorbed"]) for r in reps),
        "predator_lost": sum(bool(r.summary["predator_lost"]) for r in reps),
    }
    table = series(
        ("time", "alpha", "beta", "canonical_alpha", "canonical_beta"),
        grid, mean_path[:, 0], mean_path[:, 1], target[:, 0], target[:, 1],
    )
    return ExperimentResult(summary, {"mean_path": table}, reps)


func = run
