"""Write experiment results to disk and read event logs back.

A run directory looks like::

    <out>/config.yaml              effective configuration
    <out>/summary.json             aggregate estimates
    <out>/<table>.csv              aggregate tables
    <out>/replicate_000/events.csv per-replicate event log
    <out>/replicate_000/<table>.csv

Everything is UTF-8 with LF line endings; CSV files always start with a
header and JSON is written with sorted keys. Nothing time-dependent is
written, so equal configurations give byte-identical directories.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import yaml

from lvevo.errors import ParseError
from lvevo.evolution.events import EVENT_FIELDS, EventLog, EventRecord


@dataclass
class Table:
    header: Tuple[str, ...]
    rows: List[tuple] = field(default_factory=list)


@dataclass
class ReplicateResult:
    summary: Dict[str, Any] = field(default_factory=dict)
    tables: Dict[str, Table] = field(default_factory=dict)
    events: Optional[EventLog] = None


@dataclass
class ExperimentResult:
    summary: Dict[str, Any] = field(default_factory=dict)
    tables: Dict[str, Table] = field(default_factory=dict)
    replicates: List[ReplicateResult] = field(default_factory=list)


def _plain(value: Any) -> Any:
    """numpy scalars and arrays to JSON types; non-finite floats to None."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_plain(v) for v in value]
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_plain(v) for v in row])
    return path


def write_json(path: Path, payload: Dict[str, Any]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as f:
        json.dump(_plain(payload), f, indent=2, sort_keys=True)
        f.write("\n")
    return path


def write_config(path: Path, snapshot: Dict[str, Any]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as f:
        yaml.safe_dump(_plain(snapshot), f, sort_keys=True, default_flow_style=False)
    return path


def write_event_log(path: Path, events: EventLog) -> Path:
    return write_csv(path, EVENT_FIELDS, (r.as_row() for r in events))


_CASTS = (int, float, int, float, float, int)


def read_event_log(path: Path) -> List[EventRecord]:
    """Parse an event log. Line numbers in :class:`ParseError` count the
    header as line 1."""
    path = Path(path)
    records: List[EventRecord] = []
    with path.open("r", encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None or tuple(header) != EVENT_FIELDS:
            raise ParseError(f"expected header {','.join(EVENT_FIELDS)}, got {header}", 1)
        for line, row in enumerate(reader, start=2):
            if len(row) != len(EVENT_FIELDS):
                raise ParseError(f"expected {len(EVENT_FIELDS)} fields, got {len(row)}", line)
            try:
                values = [cast(v) for cast, v in zip(_CASTS, row)]
            except ValueError as exc:
                raise ParseError(str(exc), line) from exc
            if values[0] != line - 2:
                raise ParseError(f"event_index {values[0]} out of sequence", line)
            records.append(EventRecord(*values))
    if not records:
        raise ParseError("log has no initial-state row", 2)
    return records


def save_run(out_dir: str | Path, result: ExperimentResult, snapshot: Dict[str, Any]) -> Path:
    """Persist a finished (or partial) experiment into ``out_dir``."""
    path = Path(out_dir)
    path.mkdir(parents=True, exist_ok=True)
    write_config(path / "config.yaml", snapshot)
    write_json(path / "summary.json", result.summary)
    for name, table in result.tables.items():
        write_csv(path / f"{name}.csv", table.header, table.rows)
    for i, rep in enumerate(result.replicates):
        rep_dir = path / f"replicate_{i:03d}"
        if rep.events is not None and rep.events.enabled:
            write_event_log(rep_dir / "events.csv", rep.events)
        for name, table in rep.tables.items():
            write_csv(rep_dir / f"{name}.csv", table.header, table.rows)
    return path


def load_snapshot(path: str | Path) -> Dict[str, Any]:
    with open(path, "r", encoding="utf-8") as f:
        return yaml.safe_load(f) or {}
