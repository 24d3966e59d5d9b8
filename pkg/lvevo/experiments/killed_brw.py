"""Killed branching random walk: growth exponent beyond ``c t``."""

from __future__ import annotations

from typing import Any, Dict

from lvevo.brw.walk import BRWRun, growth_from_runs, killed_run
from lvevo.core.config import PARTICLE_BUDGET, ExperimentConfig
from lvevo.core.rng import RngStream
from lvevo.experiments._common import run_replicates
from lvevo.store_results import ExperimentResult, ReplicateResult, Table

name = "killed-brw"
description = "Killed BRW: (1/t) log Z_t(gamma, [ct, inf)) against 1 + Lambda(c), and the extinction fraction."
defaults: Dict[str, Any] = {
    "gamma": 0.3,
    "c": 0.4,
    "K": 10.0,
    "t_end": 12.0,
    "kill": True,
    "n_samples": 60,
    "budget": PARTICLE_BUDGET,
}


def replicate(params: Dict[str, Any], stream: RngStream) -> ReplicateResult:
    run = killed_run(
        float(params["gamma"]) if params.get("kill", True) else None,
        float(params["c"]),
        float(params["K"]),
        float(params["t_end"]),
        stream.generator(),
        n_samples=int(params["n_samples"]),
        budget=int(params["budget"]),
    )
    rows = list(zip(run.times, run.counts, run.tail_counts))
    return ReplicateResult(
        summary={"extinct": run.extinct, "births": run.births, "kills": run.kills},
        tables={"counts": Table(("t", "count", "tail_count"), rows)},
    )


def _as_run(rep: ReplicateResult) -> BRWRun:
    rows = rep.tables["counts"].rows
    return BRWRun(
        times=[r[0] for r in rows],
        counts=[r[1] for r in rows],
        tail_counts=[r[2] for r in rows],
    )


def run(cfg: ExperimentConfig) -> ExperimentResult:
    reps = run_replicates(cfg, replicate)
    est = growth_from_runs([_as_run(r) for r in reps], float(cfg.params["c"]))
    summary = {
        "replicates": est.replicates,
        "survivors": est.survivors,
        "extinction_fraction": est.extinction_fraction,
        "raw_exponent": est.raw,
        "corrected_exponent": est.corrected,
        "corrected_stderr": est.stderr,
        "target": est.target,
    }
    return ExperimentResult(summary, {}, reps)


func = run
