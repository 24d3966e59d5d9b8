"""Free branching random walk: mean population and front speed."""

from __future__ import annotations

import math
from typing import Any, Dict

import numpy as np

from lvevo.brw.rates import solve_speed_a
from lvevo.brw.walk import front_speed, simulate_brw
from lvevo.core.config import PARTICLE_BUDGET, ExperimentConfig
from lvevo.core.rng import RngStream
from lvevo.experiments._common import mean_stderr, run_replicates
from lvevo.store_results import ExperimentResult, ReplicateResult, Table

name = "brw"
description = "Branching random walk: E[count] against e^t and the speed of the rightmost particle."
defaults: Dict[str, Any] = {
    "t_end": 5.0,
    "n_samples": 50,
    "budget": PARTICLE_BUDGET,
    "log_corrected": True,
}


def replicate(params: Dict[str, Any], stream: RngStream) -> ReplicateResult:
    t_end = float(params["t_end"])
    grid = np.linspace(t_end / int(params["n_samples"]), t_end, int(params["n_samples"]))
    run = simulate_brw(0.0, t_end, stream.generator(), sample_times=grid, budget=int(params["budget"]))
    return ReplicateResult(
        summary={
            "count": run.counts[-1],
            "rightmost_over_t": run.maxima[-1] / t_end,
            "front_speed": front_speed(run, log_corrected=bool(params.get("log_corrected", True))),
        },
        tables={"samples": Table(("t", "count", "max", "min"), run.as_rows())},
    )


def run(cfg: ExperimentConfig) -> ExperimentResult:
    t_end = float(cfg.params["t_end"])
    reps = run_replicates(cfg, replicate)
    count, count_err = mean_stderr([r.summary["count"] for r in reps])
    expected = math.exp(t_end)
    summary: Dict[str, Any] = {
        "replicates": len(reps),
        "mean_count": count,
        "mean_count_stderr": count_err,
        "expected_count": expected,
        "count_z": (count - expected) / count_err if count_err and math.isfinite(count_err) else None,
        "speed_a": solve_speed_a(),
    }
    for key in ("rightmost_over_t", "front_speed"):
        summary[key], summary[f"{key}_stderr"] = mean_stderr([r.summary[key] for r in reps])
    return ExperimentResult(summary, {}, reps)


func = run
