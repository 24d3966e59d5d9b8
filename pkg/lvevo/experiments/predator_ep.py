"""Two-trait predator EP: size of the coexisting cloud and its drift."""

from __future__ import annotations

from typing import Any, Dict

import numpy as np

from lvevo.core.config import PREDATOR_EP_CLOCK, ExperimentConfig
from lvevo.core.rng import RngStream
from lvevo.evolution.predator_ep import run_predator_ep
from lvevo.experiments._common import float_list, mean_stderr, run_replicates, series, system_params
from lvevo.lv.traits import PredatorTrait
from lvevo.store_results import ExperimentResult, ReplicateResult

name = "predator-ep"
description = "Predator EP with mutating consumption and death rates; cloud snapshots in (alpha, log ell)."
replayable = True
defaults: Dict[str, Any] = {
    "r": 1.0,
    "alpha0": 3.0,
    "delta0": 0.45,
    "epsilon": 0.01,
    "n": 20000,
    "snapshots": "10000,12500,15000,17500,20000",
    "clock": PREDATOR_EP_CLOCK,
    "record_every": 10,
}


def replicate(params: Dict[str, Any], stream: RngStream) -> ReplicateResult:
    n = int(params["n"])
    wanted = [int(s) for s in float_list(params.get("snapshots"), "snapshots") if s <= n]
    run = run_predator_ep(
        PredatorTrait(float(params["alpha0"]), float(params["delta0"])),
        system_params(params),
        float(params["epsilon"]),
        n,
        stream.generator(),
        snapshot_at=wanted,
        clock_mode=params["clock"],
    )
    idx = np.unique(np.append(np.arange(0, n + 1, int(params["record_every"])), n))
    tables = {
        "trajectory": series(
            ("mutation", "count", "mean_alpha", "mean_log_ell"),
            idx, run.counts[idx], run.mean_alpha[idx], run.mean_log_ell[idx],
        )
    }
    for k, cloud in sorted(run.snapshots.items()):
        tables[f"snapshot_{k}"] = series(("alpha", "log_ell"), cloud[:, 0], cloud[:, 1])
    return ReplicateResult(
        summary={
            "final_count": int(run.counts[-1]),
            "max_count": int(run.counts.max()),
            "alpha_drift": float(run.mean_alpha[-1] - run.mean_alpha[0]),
            "log_ell_drift": float(run.mean_log_ell[-1] - run.mean_log_ell[0]),
        },
        tables=tables,
        events=run.events,
    )


def run(cfg: ExperimentConfig) -> ExperimentResult:
    reps = run_replicates(cfg, replicate)
    summary: Dict[str, Any] = {"replicates": len(reps)}
    for key in ("final_count", "alpha_drift", "log_ell_drift"):
        summary[key], summary[f"{key}_stderr"] = mean_stderr([r.summary[key] for r in reps])
    summary["max_count"] = max(r.summary["max_count"] for r in reps)
    return ExperimentResult(summary, {}, reps)


func = run
