"""The speeds ``a`` and ``b`` and a table of the rate function."""

from __future__ import annotations

from typing import Any, Dict

import numpy as np

from lvevo.brw.rates import rate_function, solve_speed_a, solve_speed_b, speed_residuals, tilt_at
from lvevo.core.config import ExperimentConfig
from lvevo.store_results import ExperimentResult, Table

name = "rates"
description = "Solve Lambda(a) = -1 and Lambda(b) = -1 + b; tabulate Lambda on [0, 1)."
defaults: Dict[str, Any] = {"grid": 20}


def run(cfg: ExperimentConfig) -> ExperimentResult:
    a, b = solve_speed_a(), solve_speed_b()
    res_a, res_b = speed_residuals()
    xs = np.linspace(0.0, 0.95, int(cfg.params.get("grid", 20)))
    rows = [(x, rate_function(x), 1.0 + rate_function(x)) for x in xs]
    summary = {"a": a, "b": b, "residual_a": res_a, "residual_b": res_b, "theta_a": tilt_at(a)}
    return ExperimentResult(summary, {"rate_function": Table(("x", "lambda", "growth"), rows)})


func = run
