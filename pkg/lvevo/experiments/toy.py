"""Branching-selection toy model: the speeds ``a_M``."""

from __future__ import annotations

from typing import Any, Dict

import numpy as np

from lvevo.brw.rates import solve_speed_a
from lvevo.brw.toy import simulate_toy
from lvevo.core.config import ExperimentConfig
from lvevo.core.rng import RngStream
from lvevo.experiments._common import float_list, mean_stderr, run_replicates
from lvevo.store_results import ExperimentResult, ReplicateResult, Table

name = "toy"
description = "M-particle branching-selection model: a_M for each M and the gap to a."
defaults: Dict[str, Any] = {
    "M": "1,2,4,8,16,32,64,128,256",
    "t_end": 200.0,
    "n_samples": 200,
}


def _sizes(params: Dict[str, Any]):
    return [int(m) for m in float_list(params["M"], "M")]


def replicate(params: Dict[str, Any], stream: RngStream) -> ReplicateResult:
    rows = []
    for i, m in enumerate(_sizes(params)):
        run = simulate_toy(m, float(params["t_end"]), stream.child(i).generator(), n_samples=int(params["n_samples"]))
        rows.append((m, run.speed))
    return ReplicateResult(tables={"speeds": Table(("M", "a_M"), rows)})


def run(cfg: ExperimentConfig) -> ExperimentResult:
    reps = run_replicates(cfg, replicate)
    a = solve_speed_a()
    speeds = np.array([[row[1] for row in r.tables["speeds"].rows] for r in reps])
    rows = []
    for k, m in enumerate(_sizes(cfg.params)):
        mean, err = mean_stderr(speeds[:, k])
        rows.append((m, mean, err, a - mean))
    means = [row[1] for row in rows]
    summary = {
        "replicates": len(reps),
        "speed_a": a,
        "speeds": {str(row[0]): row[1] for row in rows},
        "increasing": bool(np.all(np.diff(means) > 0)),
    }
    return ExperimentResult(summary, {"speeds": Table(("M", "a_M", "stderr", "gap"), rows)}, reps)


func = run
