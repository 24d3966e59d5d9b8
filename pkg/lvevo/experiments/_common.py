"""Helpers shared by the experiment modules."""

from __future__ import annotations

import math
from typing import Any, Callable, Dict, List, Sequence, Tuple

import numpy as np

from lvevo.core.config import ExperimentConfig
from lvevo.core.rng import replicate_streams
from lvevo.errors import ConfigError
from lvevo.executor import map_replicates
from lvevo.lv.traits import SystemParams
from lvevo.store_results import ReplicateResult, Table


def run_replicates(cfg: ExperimentConfig, replicate: Callable[[Dict[str, Any], Any], ReplicateResult]) -> List[ReplicateResult]:
    return map_replicates(replicate, cfg.params, replicate_streams(cfg.seed, cfg.replicates), cfg.workers)


def system_params(params: Dict[str, Any]) -> SystemParams:
    """``beta`` wins over ``r`` when both are given."""
    if params.get("beta") is not None:
        return SystemParams(beta=float(params["beta"]))
    return SystemParams.from_r(float(params.get("r", 1.0)))


def float_list(value: Any, field: str) -> List[float]:
    """``[1, 2]``, ``"1,2"`` or a bare number."""
    if value is None or value == "":
        return []
    if isinstance(value, str):
        try:
            return [float(v) for v in value.split(",") if v.strip()]
        except ValueError as exc:
            raise ConfigError(field, f"expected comma-separated numbers, got {value!r}") from exc
    if isinstance(value, (int, float)):
        return [float(value)]
    return [float(v) for v in value]


def pair_list(value: Any, field: str) -> List[Tuple[float, float]]:
    """``"2,4;2.3,4.22"`` or ``[[2, 4], [2.3, 4.22]]``."""
    if value is None or value == "":
        return []
    items = value.split(";") if isinstance(value, str) else value
    pairs = []
    for item in items:
        nums = float_list(item, field)
        if len(nums) != 2:
            raise ConfigError(field, f"expected pairs of numbers, got {item!r}")
        pairs.append((nums[0], nums[1]))
    return pairs


def mean_stderr(values: Sequence[float]) -> Tuple[float, float]:
    arr = np.asarray([v for v in values if v is not None and math.isfinite(v)], dtype=float)
    if arr.size == 0:
        return math.nan, math.nan
    if arr.size == 1:
        return float(arr[0]), math.nan
    return float(arr.mean()), float(arr.std(ddof=1) / math.sqrt(arr.size))


def series(header: Tuple[str, ...], *columns: Sequence[float]) -> Table:
    return Table(header, [tuple(row) for row in zip(*columns)])
