# lvevo/experiments/__init__.py
# -----------------------------
# Discovers every module in this package that defines ``func`` (the
# experiment entry point), ``name`` and ``description``, and exposes them as
# :class:`Experiment` objects. ``defaults`` (parameter name -> default value)
# drives the command-line flags of each experiment.

from __future__ import annotations

import importlib
import logging
import pkgutil
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List

log = logging.getLogger(__name__)


@dataclass
class Experiment:
    name: str
    description: str
    func: Callable
    defaults: Dict[str, Any] = field(default_factory=dict)
    replayable: bool = False


EXPERIMENTS: List[Experiment] = []

package_path = Path(__file__).parent
for _, module_name, is_pkg in pkgutil.iter_modules([str(package_path)]):
    if is_pkg or module_name.startswith("_"):
        continue
    module = importlib.import_module(f".{module_name}", package=__name__)
    func = getattr(module, "func", None)
    if not callable(func):
        continue
    EXPERIMENTS.append(
        Experiment(
            name=getattr(module, "name", module_name),
            description=getattr(module, "description", func.__doc__ or ""),
            func=func,
            defaults=dict(getattr(module, "defaults", {})),
            replayable=bool(getattr(module, "replayable", False)),
        )
    )
EXPERIMENTS.sort(key=lambda e: e.name)


def get_experiment(name: str) -> Experiment:
    for exp in EXPERIMENTS:
        if exp.name == name:
            return exp
    raise KeyError(f"unknown experiment {name!r}; choose from {', '.join(e.name for e in EXPERIMENTS)}")


__all__ = ["EXPERIMENTS", "Experiment", "get_experiment"]
