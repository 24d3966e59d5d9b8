# lvevo/core/config.py
"""
Application-wide constants and the YAML config loader.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from lvevo.errors import ConfigError

# --------------------------------------------------------------------------- #
#  Paths
# --------------------------------------------------------------------------- #
REPO_ROOT = Path(__file__).resolve().parents[2]
CONFIG_PATH = REPO_ROOT / "config.yaml"
CONFIGS_DIR = REPO_ROOT / "configs"
# Overrides the default output directory when --out is not given.
OUT_DIR_ENV = "LVEVO_OUT_DIR"
DEFAULT_OUT_DIR = "results"

# --------------------------------------------------------------------------- #
#  Numerics
# --------------------------------------------------------------------------- #
# Densities below this are clipped to zero by the ODE oracle.
DENSITY_FLOOR = 1e-14
ROUNDING_SLACK = 1e-12
ODE_RTOL = 1e-9
ODE_ATOL = 1e-13
# Removable singularity of sinh(t)/t is filled by its series below this.
PHI_SERIES_CUTOFF = 1e-4
# Bracket for the Legendre maximisation inside the rate function.
THETA_BRACKET = (1e-8, 50.0)
NEWTON_TOL = 1e-12
SPEED_XTOL = 1e-14

# --------------------------------------------------------------------------- #
#  Reference values (limit theorems)
# --------------------------------------------------------------------------- #
SPEED_A = 0.9053
SPEED_B = 0.5667
CANONICAL_DRIFT = 2.0 / (3.0 * 3.141592653589793)

# --------------------------------------------------------------------------- #
#  Simulation defaults
# --------------------------------------------------------------------------- #
PARTICLE_BUDGET = 1_000_000
BURN_IN = 0.3
# Mutation clocks: "total" = one event per unit time on average,
# "per_capita" = every live type mutates at rate one.
PREY_EP_CLOCK = "total"
PREDATOR_EP_CLOCK = "total"
APEP_CLOCK = "discrete"
DPEP_CLOCK = "per_capita"
# Resampling a probability-zero tie more often than this means the inputs
# themselves are degenerate.
MAX_RESAMPLE = 100

# --------------------------------------------------------------------------- #
#  Logging
# --------------------------------------------------------------------------- #
LOG_FORMAT = "[%(levelname)s] %(message)s"
DEFAULT_LOG_LEVEL = "INFO"


def load_config(path: str | Path = CONFIG_PATH) -> Dict[str, Any]:
    """Read a YAML config file and return it as a dict (empty file -> {})."""
    with open(path, "r", encoding="utf-8") as f:
        return yaml.safe_load(f) or {}


def default_out_dir() -> str:
    return os.getenv(OUT_DIR_ENV, DEFAULT_OUT_DIR)


# --------------------------------------------------------------------------- #
#  Experiment configuration
# --------------------------------------------------------------------------- #
@dataclass
class ExperimentConfig:
    """One experiment: its kind, its parameters and how to run it.

    ``params`` holds the kind-specific values (``beta`` or ``r``, ``delta``,
    ``epsilon``, ``gamma``, ``K``, ``M``, horizons, ...). Built with
    :meth:`from_mapping` from the ``experiment:`` section of a YAML file
    merged with command-line overrides.
    """

    kind: str
    params: Dict[str, Any] = field(default_factory=dict)
    seed: int = 0
    replicates: int = 1
    workers: int = 1
    out_dir: Optional[str] = None

    @classmethod
    def from_mapping(cls, mapping: Dict[str, Any], overrides: Optional[Dict[str, Any]] = None) -> "ExperimentConfig":
        """Values in ``overrides`` that are not ``None`` win over ``mapping``."""
        merged = dict(mapping or {})
        params = dict(merged.pop("params", None) or {})
        for key, value in (overrides or {}).items():
            if value is None:
                continue
            if key in _RUN_FIELDS:
                merged[key] = value
            else:
                params[key] = value
        unknown = set(merged) - set(_RUN_FIELDS)
        if unknown:
            raise ConfigError(sorted(unknown)[0], "unknown experiment field")
        if "kind" not in merged:
            raise ConfigError("kind", "missing")
        cfg = cls(params=params, **merged)
        cfg.validate()
        return cfg

    def validate(self) -> "ExperimentConfig":
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise ConfigError("seed", f"must be an integer in [0, 2**64), got {self.seed!r}")
        if not isinstance(self.replicates, int) or self.replicates < 1:
            raise ConfigError("replicates", f"must be >= 1, got {self.replicates!r}")
        if not isinstance(self.workers, int) or self.workers < 0:
            raise ConfigError("workers", f"must be >= 0 (0 = one per core), got {self.workers!r}")
        p = self.params
        if "beta" in p and not _number(p["beta"]) > 1:
            raise ConfigError("beta", f"must exceed 1 so that r = beta - 1 > 0, got {p['beta']!r}")
        for key in ("r", "epsilon", "delta", "gamma", "K", "t_end", "horizon"):
            if key in p and not _number(p[key]) > 0:
                raise ConfigError(key, f"must be positive, got {p[key]!r}")
        if "n" in p and not (isinstance(p["n"], int) and p["n"] >= 1):
            raise ConfigError("n", f"must be an integer >= 1, got {p['n']!r}")
        if "M" in p and not all(math.isfinite(m) and m >= 1 and m == int(m) for m in _numbers(p["M"])):
            raise ConfigError("M", f"must be integers >= 1, got {p['M']!r}")
        if any(not e > 0 for e in _numbers(p.get("epsilons"))):
            raise ConfigError("epsilons", f"all must be positive, got {p['epsilons']!r}")
        return self

    def snapshot(self) -> Dict[str, Any]:
        """Plain mapping written next to the results and read back by replay."""
        return {
            "experiment": {
                "kind": self.kind,
                "seed": self.seed,
                "replicates": self.replicates,
                "params": dict(self.params),
            }
        }


_RUN_FIELDS = ("kind", "seed", "replicates", "workers", "out_dir")


def _number(value: Any) -> float:
    try:
        return float(value)
    except (TypeError, ValueError):
        return math.nan


def _numbers(value: Any) -> list:
    """``"1,2"``, ``[1, 2]`` or ``1`` as floats; unparsable entries become nan."""
    if value is None or value == "":
        return []
    if isinstance(value, str):
        return [_number(v) for v in value.split(",") if v.strip()]
    if isinstance(value, (list, tuple)):
        return [_number(v) for v in value]
    return [_number(value)]
