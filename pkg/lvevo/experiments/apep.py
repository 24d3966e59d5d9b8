"""Alpha predator EP: linear growth of ``alpha_min`` and the ``1 / epsilon``
scaling of the number of types.

With ``epsilons`` set every replicate runs once per value and the
experiment reports the log-log exponents of ``1 / mean(N)`` and of the
mean maximum spacing against ``epsilon``.
"""

from __future__ import annotations

import logging
from typing import Any, Dict

import numpy as np

from lvevo.analysis import TrajectorySample, apep_profile, scaling_regression, slope_estimate
from lvevo.core.config import APEP_CLOCK, BURN_IN, ExperimentConfig
from lvevo.core.rng import RngStream
from lvevo.errors import InsufficientData
from lvevo.evolution.apep import count_bound, run_apep
from lvevo.experiments._common import float_list, mean_stderr, run_replicates, series, system_params
from lvevo.store_results import ExperimentResult, ReplicateResult, Table

log = logging.getLogger(__name__)

name = "apep"
description = "APEP: alpha_min speed, type counts, spacing profile; scaling over several epsilons."
replayable = True
defaults: Dict[str, Any] = {
    "r": 1.0,
    "alpha0": 3.0,
    "epsilon": 0.01,
    "n": 50000,
    "clock": APEP_CLOCK,
    "record_every": 10,
    "epsilons": "",
    "average_last": 25000,
}


def _scaling_replicate(params: Dict[str, Any], stream: RngStream) -> ReplicateResult:
    n, last = int(params["n"]), int(params["average_last"])
    rows = []
    for i, eps in enumerate(float_list(params["epsilons"], "epsilons")):
        run = run_apep(
            float(params["alpha0"]), system_params(params), eps, n, stream.child(i).generator(),
            clock_mode=params["clock"], record_every=int(params["record_every"]), record_events=False,
        )
        window = run.steps > n - last
        rows.append((eps, float(run.counts[window].mean()), float(run.max_spacing[window].mean())))
    return ReplicateResult(tables={"scaling": Table(("epsilon", "mean_count", "mean_max_spacing"), rows)})


def replicate(params: Dict[str, Any], stream: RngStream) -> ReplicateResult:
    if float_list(params.get("epsilons"), "epsilons"):
        return _scaling_replicate(params, stream)
    eps = float(params["epsilon"])
    system = system_params(params)
    run = run_apep(
        float(params["alpha0"]), system, eps, int(params["n"]), stream.generator(),
        clock_mode=params["clock"], record_every=int(params["record_every"]),
    )
    speed, speed_err = slope_estimate(TrajectorySample(run.steps, run.alpha_min))
    summary = {
        "speed_per_step": speed,
        "speed_per_step_stderr": speed_err,
        "alpha_min_over_n": run.state.alpha_min / run.state.step_count,
        "max_count": int(run.counts.max()),
        "final_count": run.state.n_types,
        "max_difference": float(run.state.differences.max()),
    }
    if params["clock"] != "discrete":
        try:
            summary["speed_per_time"] = slope_estimate(TrajectorySample(run.times, run.alpha_max))[0]
        except (InsufficientData, ValueError) as exc:
            log.warning("no continuous-time speed: %s", exc)
    tables = {
        "counts": series(("time", "value"), run.steps, run.counts),
        "alpha_min": series(("time", "value"), run.steps, run.alpha_min),
        "alpha_max": series(("time", "value"), run.times, run.alpha_max),
    }
    if run.state.n_types >= 2:
        profile = apep_profile(run.state.alphas, eps)
        summary["profile_fit_rate"] = profile.fit_rate
        summary["profile_fit_residual"] = profile.fit_residual
        tables["profile"] = Table(("abscissa", "mass"), profile.rows())
    return ReplicateResult(summary=summary, tables=tables, events=run.events)


def _scaling_summary(reps) -> ExperimentResult:
    table = np.array([r.tables["scaling"].rows for r in reps], dtype=float).mean(axis=0)
    eps, counts, spacing = table[:, 0], table[:, 1], table[:, 2]
    inverse = scaling_regression(list(zip(eps, 1.0 / counts)))
    spread = scaling_regression(list(zip(eps, spacing)))
    summary = {
        "replicates": len(reps),
        "inverse_count_exponent": inverse.exponent,
        "inverse_count_ci": [inverse.ci_low, inverse.ci_high],
        "max_spacing_exponent": spread.exponent,
        "max_spacing_ci": [spread.ci_low, spread.ci_high],
    }
    out = Table(("epsilon", "inverse_mean_count", "mean_max_spacing"), list(zip(eps, 1.0 / counts, spacing)))
    return ExperimentResult(summary, {"scaling": out}, reps)


def run(cfg: ExperimentConfig) -> ExperimentResult:
    reps = run_replicates(cfg, replicate)
    if float_list(cfg.params.get("epsilons"), "epsilons"):
        return _scaling_summary(reps)
    p = cfg.params
    speeds = [r.summary["speed_per_step"] for r in reps]
    speed, speed_err = mean_stderr(speeds)
    if len(speeds) > 1:
        spread = float(np.std(speeds, ddof=1))
    else:
        spread = reps[0].summary["speed_per_step_stderr"]
    summary: Dict[str, Any] = {
        "replicates": len(reps),
        "speed_per_step": speed,
        "speed_per_step_stderr": speed_err,
        "relative_spread": spread / speed if speed else None,
        "relative_stderr": speed_err / speed if speed else None,
        "max_count": max(r.summary["max_count"] for r in reps),
        "count_bound": count_bound(system_params(p), float(p["epsilon"])),
        "max_difference": max(r.summary["max_difference"] for r in reps),
        "burn_in": BURN_IN,
    }
    if p["clock"] != "discrete":
        summary["speed_per_time"] = mean_stderr([r.summary.get("speed_per_time") for r in reps])[0]
    return ExperimentResult(summary, {}, reps)


func = run
