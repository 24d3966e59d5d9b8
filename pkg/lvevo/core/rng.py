"""Reproducible random streams.

A run is identified by one master seed. Replicate ``i`` gets the stream
``RngStream(seed, i)``; the pair is turned into a numpy ``SeedSequence`` with
the counter as spawn key, so streams are independent and a replicate can be
rerun on its own. ``lane`` separates the streams of coupled processes that
belong to the same replicate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List

import numpy as np


@dataclass(frozen=True)
class RngStream:
    seed: int
    counter: int = 0
    lane: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must fit in 64 bits, got {self.seed}")
        if self.counter < 0 or self.lane < 0:
            raise ValueError("counter and lane must be >= 0")

    def seed_sequence(self) -> np.random.SeedSequence:
        return np.random.SeedSequence(entropy=self.seed, spawn_key=(self.counter, self.lane))

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at the start of this stream."""
        return np.random.default_rng(self.seed_sequence())

    def child(self, index: int) -> "RngStream":
        """Stream for a sub-task of this replicate (e.g. a coupled process)."""
        return RngStream(self.seed, self.counter, index + 1)


def replicate_streams(seed: int, count: int) -> List[RngStream]:
    """Per-replicate streams fanned out from one master seed."""
    return [RngStream(seed, i) for i in range(count)]


def as_generator(rng: "RngStream | np.random.Generator | int | None") -> np.random.Generator:
    """Accept a stream, an existing generator, a bare seed or ``None``."""
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngStream):
        return rng.generator()
    return np.random.default_rng(rng)
