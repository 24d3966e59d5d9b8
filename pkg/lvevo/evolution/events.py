"""Append-only event records shared by the evolution processes.

Row 0 of every log is the initial state (``parent_index == -1``); each later
row is one mutation: who mutated, what the mutant's traits were and how many
types survive afterwards. The mutant fields depend on the process:

=============  ==============  ==============
kind           mutant_field_1  mutant_field_2
=============  ==============  ==============
prey-ep        alpha           beta
predator-ep    alpha           delta
apep           alpha           1.0 (delta)
dpep           X = -log delta  1.0 (alpha)
=============  ==============  ==============
"""

from __future__ import annotations

from dataclasses import astuple, dataclass, field
from typing import Iterator, List, Tuple

EVENT_FIELDS: Tuple[str, ...] = (
    "event_index",
    "time",
    "parent_index",
    "mutant_field_1",
    "mutant_field_2",
    "survivors",
)


@dataclass(frozen=True)
class EventRecord:
    event_index: int
    time: float
    parent_index: int
    mutant_field_1: float
    mutant_field_2: float
    survivors: int

    def as_row(self) -> tuple:
        return astuple(self)


@dataclass
class EventLog:
    """Records of one run. ``enabled=False`` turns :meth:`record` into a no-op
    for long runs whose log is not wanted."""

    kind: str
    enabled: bool = True
    records: List[EventRecord] = field(default_factory=list)
    _next_index: int = 0

    def record(self, time: float, parent: int, field_1: float, field_2: float, survivors: int) -> None:
        if self.enabled:
            self.records.append(
                EventRecord(self._next_index, float(time), int(parent), float(field_1), float(field_2), int(survivors))
            )
        self._next_index += 1

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[EventRecord]:
        return iter(self.records)
