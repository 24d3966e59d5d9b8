"""Re-run an event log and check every transition.

The log gives the initial traits, and for each mutation the parent, the
mutant's traits and the number of survivors. Replaying rebuilds the
community from scratch with the closed-form algebra, compares the survivor
count and re-checks the coexistence condition of the kept set, including
that no longer prefix would also coexist.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence

import numpy as np

from lvevo.errors import LvevoError, ParseError
from lvevo.evolution.events import EventRecord
from lvevo.lv.predator import (
    check_fixed_alpha,
    check_fixed_delta,
    coexisting_prefix,
    fixed_alpha_prefix,
    fixed_delta_prefix,
    sort_by_ell,
)
from lvevo.lv.prey import classify_prey_outcome, invasion_fitness, is_viable, saturated_prey_equilibrium
from lvevo.lv.traits import PredatorTrait, PreyTrait, SystemParams

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Violation:
    line: int
    message: str


@dataclass
class ReplayReport:
    kind: str
    events: int = 0
    violations: List[Violation] = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not self.violations

    @property
    def first_violation(self):
        return self.violations[0] if self.violations else None

    def summary(self) -> str:
        text = f"{len(self.violations)} violations"
        if self.violations:
            first = self.violations[0]
            text += f" (first at line {first.line}: {first.message})"
        return text


def _line(record: EventRecord) -> int:
    return record.event_index + 2


def _system(params: Dict[str, Any]) -> SystemParams:
    if "beta" in params:
        return SystemParams(beta=float(params["beta"]))
    return SystemParams.from_r(float(params.get("r", 1.0)))


# --------------------------------------------------------------------------- #
#  Per-kind replays. Each yields (line, message) for every violation.
# --------------------------------------------------------------------------- #
def _replay_prey(records: Sequence[EventRecord], params: Dict[str, Any], report: ReplayReport) -> None:
    delta = float(params.get("delta", 1.0))
    live = [PreyTrait(records[0].mutant_field_1, records[0].mutant_field_2)]
    for rec in records[1:]:
        if not 0 <= rec.parent_index < len(live):
            report.violations.append(Violation(_line(rec), f"parent {rec.parent_index} of {len(live)} live prey"))
            continue
        alpha, beta = rec.mutant_field_1, rec.mutant_field_2
        if alpha > 0 and beta > 0:
            live = list(classify_prey_outcome(live, PreyTrait(alpha, beta), delta).survivors)
        if rec.survivors != len(live):
            report.violations.append(Violation(_line(rec), f"{rec.survivors} survivors logged, {len(live)} expected"))
        if len(live) == 2 and all(is_viable(y, delta) for y in live):
            y1, y2 = live
            if not (invasion_fitness(y1, y2, delta) > 0 and invasion_fitness(y2, y1, delta) > 0):
                report.violations.append(Violation(_line(rec), "live prey are not mutually invadable"))
        elif live and len(saturated_prey_equilibrium(live, delta).prey_support) != len(live):
            # a lone survivor may be non-viable once the predator is gone, but it must persist
            report.violations.append(Violation(_line(rec), "live prey do not persist on their own"))
        if not live:
            break


def _replay_predator(records: Sequence[EventRecord], params: Dict[str, Any], report: ReplayReport) -> None:
    system = _system(params)
    live = [PredatorTrait(records[0].mutant_field_1, records[0].mutant_field_2)]
    for rec in records[1:]:
        if not 0 <= rec.parent_index < len(live):
            report.violations.append(Violation(_line(rec), f"parent {rec.parent_index} of {len(live)} predators"))
            continue
        candidates = sort_by_ell(live + [PredatorTrait(rec.mutant_field_1, rec.mutant_field_2)])
        m = coexisting_prefix(candidates, system)
        live = candidates[:m]
        if rec.survivors != m:
            report.violations.append(Violation(_line(rec), f"{rec.survivors} survivors logged, {m} expected"))
        if coexisting_prefix(live, system) != len(live):
            report.violations.append(Violation(_line(rec), "kept predators do not coexist"))


def _replay_apep(records: Sequence[EventRecord], params: Dict[str, Any], report: ReplayReport) -> None:
    system = _system(params)
    alphas = np.array([records[0].mutant_field_1])
    for rec in records[1:]:
        if not 0 <= rec.parent_index < alphas.size:
            report.violations.append(Violation(_line(rec), f"parent {rec.parent_index} of {alphas.size} types"))
            continue
        candidates = np.sort(np.append(alphas, rec.mutant_field_1))[::-1]
        m = fixed_delta_prefix(candidates, system)
        alphas = candidates[:m]
        if rec.survivors != m:
            report.violations.append(Violation(_line(rec), f"{rec.survivors} survivors logged, {m} expected"))
        if not check_fixed_delta(alphas, system):
            report.violations.append(Violation(_line(rec), "kept consumption rates violate the coexistence condition"))
        if m < candidates.size and check_fixed_delta(candidates[: m + 1], system):
            report.violations.append(Violation(_line(rec), "truncation removed a coexisting type"))


def _replay_dpep(records: Sequence[EventRecord], params: Dict[str, Any], report: ReplayReport) -> None:
    system = _system(params)
    xs = np.array([records[0].mutant_field_1])
    for rec in records[1:]:
        if not 0 <= rec.parent_index < xs.size:
            report.violations.append(Violation(_line(rec), f"parent {rec.parent_index} of {xs.size} types"))
            continue
        candidates = np.sort(np.append(xs, rec.mutant_field_1))[::-1]
        m = fixed_alpha_prefix(candidates, system)
        xs = candidates[:m]
        if rec.survivors != m:
            report.violations.append(Violation(_line(rec), f"{rec.survivors} survivors logged, {m} expected"))
        if not check_fixed_alpha(xs, system):
            report.violations.append(Violation(_line(rec), "kept log-traits violate the coexistence condition"))
        if m < candidates.size and check_fixed_alpha(candidates[: m + 1], system):
            report.violations.append(Violation(_line(rec), "truncation removed a coexisting type"))


_REPLAYERS = {
    "prey-ep": _replay_prey,
    "predator-ep": _replay_predator,
    "apep": _replay_apep,
    "dpep": _replay_dpep,
}


def replay(records: Sequence[EventRecord], kind: str, params: Dict[str, Any]) -> ReplayReport:
    if kind not in _REPLAYERS:
        raise ValueError(f"no replay for experiment kind {kind!r}; choose from {', '.join(_REPLAYERS)}")
    if not records or records[0].parent_index != -1:
        raise ParseError("first row must be the initial state (parent_index -1)", 2)
    report = ReplayReport(kind=kind, events=len(records) - 1)
    for prev, rec in zip(records, records[1:]):
        if rec.time < prev.time:
            report.violations.append(Violation(_line(rec), "time went backwards"))
    try:
        _REPLAYERS[kind](records, params, report)
    except LvevoError as exc:
        # the algebra refused a logged state; report it rather than crash
        report.violations.append(Violation(-1, f"replay stopped: {exc}"))
    report.violations.sort(key=lambda v: (v.line < 0, v.line))
    log.info("replay of %s log: %d events, %s", kind, report.events, report.summary())
    return report
