"""Worker pool for replicate runs.

Replicates share nothing: each gets its own :class:`RngStream` and the
results come back in replicate order whatever order the workers finish in.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from itertools import repeat
from typing import Any, Callable, Dict, List, Sequence

import psutil

from lvevo.core.rng import RngStream

log = logging.getLogger(__name__)


def default_workers() -> int:
    """One worker per physical core."""
    return psutil.cpu_count(logical=False) or 1


def map_replicates(
    func: Callable[[Dict[str, Any], RngStream], Any],
    params: Dict[str, Any],
    streams: Sequence[RngStream],
    workers: int = 1,
) -> List[Any]:
    """``[func(params, s) for s in streams]``, in a process pool when
    ``workers != 1`` (``0`` means :func:`default_workers`).

    ``func`` must be a module-level function so the pool can pickle it.
    """
    if workers == 0:
        workers = default_workers()
    workers = min(workers, len(streams))
    if workers <= 1:
        return [func(params, s) for s in streams]
    log.info("running %d replicates on %d workers", len(streams), workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, repeat(params), streams))


__all__ = ["default_workers", "map_replicates"]
