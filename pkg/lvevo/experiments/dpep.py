"""Delta predator EP: front speeds of ``X_max`` and ``X_min`` and the growth
of ``N_t``."""

from __future__ import annotations

from typing import Any, Dict

import numpy as np

from lvevo.analysis import TrajectorySample, dpep_profile, slope_estimate
from lvevo.brw.rates import front_log_correction, solve_speed_a, solve_speed_b
from lvevo.core.config import DPEP_CLOCK, ExperimentConfig
from lvevo.core.rng import RngStream
from lvevo.evolution.dpep import run_dpep
from lvevo.experiments._common import mean_stderr, run_replicates, series, system_params
from lvevo.store_results import ExperimentResult, ReplicateResult, Table

name = "dpep"
description = "DPEP: speeds of the fittest and least fit types and (1/t) log N_t."
replayable = True
defaults: Dict[str, Any] = {
    "r": 1.0,
    "x0": 1.0,
    "t_end": 20.0,
    "epsilon": 1.0,
    "clock": DPEP_CLOCK,
    "max_events": 500000,
    "sample_every": 10,
    "log_corrected": True,
}


def replicate(params: Dict[str, Any], stream: RngStream) -> ReplicateResult:
    run = run_dpep(
        system_params(params),
        float(params["t_end"]),
        stream.generator(),
        x0=float(params["x0"]),
        epsilon=float(params["epsilon"]),
        clock_mode=params["clock"],
        max_events=int(params["max_events"]),
        sample_every=int(params["sample_every"]),
    )
    fronts = run.x_max
    if params.get("log_corrected", True):
        fronts = fronts + np.array([front_log_correction(t) for t in run.times])
    max_speed, max_err = slope_estimate(TrajectorySample(run.times, fronts))
    min_speed, min_err = slope_estimate(TrajectorySample(run.times, run.x_min))
    tables = {
        "front": series(("time", "x_max", "x_min", "count"), run.times, run.x_max, run.x_min, run.counts),
    }
    if run.state.n_types >= 2:
        tables["profile"] = Table(("abscissa", "mass"), dpep_profile(run.state.positions()).rows())
    return ReplicateResult(
        summary={
            "x_max_speed": max_speed,
            "x_max_speed_stderr": max_err,
            "x_min_speed": min_speed,
            "x_min_speed_stderr": min_err,
            "log_count_rate": run.log_count_rate,
            "final_count": run.state.n_types,
            "insertions": run.state.insertions,
            "guaranteed_count": run.state.guaranteed_count,
        },
        tables=tables,
        events=run.events,
    )


def run(cfg: ExperimentConfig) -> ExperimentResult:
    reps = run_replicates(cfg, replicate)
    summary: Dict[str, Any] = {"replicates": len(reps), "speed_a": solve_speed_a(), "speed_b": solve_speed_b()}
    for key in ("x_max_speed", "x_min_speed", "log_count_rate", "final_count"):
        summary[key], summary[f"{key}_stderr"] = mean_stderr([r.summary[key] for r in reps])
    summary["min_guaranteed_count"] = min(r.summary["guaranteed_count"] for r in reps)
    return ExperimentResult(summary, {}, reps)


func = run
