"""
Command-line interface.

Usage:
    python -m lvevo <experiment> [--seed N] [--replicates N] [--out DIR] [--param value ...]
    python -m lvevo run --config configs/apep_front.yaml
    python -m lvevo replay results/apep/replicate_000/events.csv

Each experiment in :mod:`lvevo.experiments` becomes a subcommand whose
``--<param>`` flags come from the experiment's ``defaults``. Parameters are
resolved in this order, later sources winning: experiment defaults, the
``experiments:`` section of the root ``config.yaml``, the ``experiment:``
section of ``--config``, command-line flags.

Exit codes: 0 success, 1 failure (or replay violations), 2 invalid
configuration, 3 particle or event budget exceeded (partial results written).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

from lvevo.core.config import (
    CONFIG_PATH,
    DEFAULT_LOG_LEVEL,
    LOG_FORMAT,
    ExperimentConfig,
    default_out_dir,
    load_config,
)
from lvevo.errors import BudgetExceeded, ConfigError, LvevoError
from lvevo.experiments import EXPERIMENTS, get_experiment
from lvevo.replay import replay
from lvevo.store_results import ExperimentResult, load_snapshot, read_event_log, save_run

logger = logging.getLogger(__name__)

EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected true/false, got {text!r}")


def _flag_type(default: Any) -> Callable[[str], Any]:
    if isinstance(default, bool):
        return _parse_bool
    if isinstance(default, int):
        return int
    if isinstance(default, float):
        return float
    return str


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML file with an 'experiment:' section")
    common.add_argument("--seed", type=int, help="master seed")
    common.add_argument("--replicates", type=int, help="number of independent replicates")
    common.add_argument("--workers", type=int, help="worker processes (0 = one per core)")
    common.add_argument("--out", help="output directory")
    common.add_argument("--quiet", action="store_true", help="only log warnings and errors")
    common.add_argument("--json", action="store_true", help="print the summary as JSON")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lvevo", description="Predator-prey trait evolution experiments.")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common_flags()
    for exp in EXPERIMENTS:
        p = sub.add_parser(exp.name, parents=[common], help=exp.description, description=exp.description)
        for key, default in exp.defaults.items():
            p.add_argument(
                f"--{key.replace('_', '-')}",
                dest=f"param_{key}",
                type=_flag_type(default),
                default=None,
                help=f"(default: {default})",
            )
    sub.add_parser("run", parents=[common], help="run the experiment described by --config")
    rp = sub.add_parser("replay", help="re-check every transition of an event log")
    rp.add_argument("log", help="events.csv written by an evolution experiment")
    rp.add_argument("--kind", help="experiment kind (default: from the run's config.yaml)")
    rp.add_argument("--config", help="config snapshot (default: config.yaml next to the replicate directory)")
    rp.add_argument("--quiet", action="store_true")
    rp.add_argument("--json", action="store_true")
    return parser


def _setup_logging(settings: Dict[str, Any], quiet: bool) -> None:
    level = "WARNING" if quiet else str(settings.get("level", DEFAULT_LOG_LEVEL)).upper()
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if settings.get("file"):
        path = Path(settings["file"])
        path.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(path, encoding="utf-8"))
    logging.basicConfig(level=level, format=LOG_FORMAT, handlers=handlers, force=True)


def resolve_config(args: argparse.Namespace, root: Dict[str, Any]) -> ExperimentConfig:
    """Merge defaults, root config, ``--config`` and flags into one config."""
    section: Dict[str, Any] = {}
    if args.config:
        section = dict(load_config(args.config).get("experiment") or {})
    kind = section.get("kind") if args.command == "run" else args.command
    if kind is None:
        raise ConfigError("kind", "'run' needs --config with experiment.kind")
    if section.get("kind", kind) != kind:
        raise ConfigError("kind", f"--config describes {section['kind']!r}, not {kind!r}")
    try:
        exp = get_experiment(kind)
    except KeyError as exc:
        raise ConfigError("kind", str(exc)) from exc

    params = dict(exp.defaults)
    params.update((root.get("experiments") or {}).get(kind) or {})
    params.update(section.pop("params", None) or {})
    mapping = {k: v for k, v in (root.get("run") or {}).items() if k in ("seed", "replicates", "workers")}
    mapping.update(section)
    mapping["kind"] = kind
    mapping["params"] = params
    overrides: Dict[str, Any] = {
        "seed": args.seed,
        "replicates": args.replicates,
        "workers": args.workers,
        "out_dir": args.out,
    }
    for key in exp.defaults:
        overrides[key] = getattr(args, f"param_{key}", None)
    cfg = ExperimentConfig.from_mapping(mapping, overrides)
    if cfg.out_dir is None:
        cfg.out_dir = str(Path(default_out_dir()) / kind)
    return cfg


def _print_summary(summary: Dict[str, Any], as_json: bool) -> None:
    if as_json:
        print(json.dumps(summary, indent=2, sort_keys=True, default=float))
        return
    for key in sorted(summary):
        value = summary[key]
        if isinstance(value, (dict, list)):
            value = json.dumps(value, sort_keys=True, default=float)
        print(f"{key}: {value}")


def _run(cfg: ExperimentConfig, as_json: bool) -> int:
    logger.info("Running %s (seed=%d, replicates=%d) into %s", cfg.kind, cfg.seed, cfg.replicates, cfg.out_dir)
    try:
        result = get_experiment(cfg.kind).func(cfg)
    except BudgetExceeded as exc:
        logger.error("Budget exceeded: %s", exc)
        partial = ExperimentResult(summary={"status": "budget_exceeded", "message": str(exc)})
        save_run(cfg.out_dir, partial, cfg.snapshot())
        _print_summary(partial.summary, as_json)
        return EXIT_BUDGET
    except LvevoError:
        logger.exception("Experiment %s failed", cfg.kind)
        return EXIT_FAILURE
    path = save_run(cfg.out_dir, result, cfg.snapshot())
    logger.info("Results saved to %s", path)
    _print_summary(result.summary, as_json)
    return 0


def _replay(args: argparse.Namespace) -> int:
    log_path = Path(args.log)
    snapshot_path = Path(args.config) if args.config else log_path.parent.parent / "config.yaml"
    section: Dict[str, Any] = {}
    if snapshot_path.is_file():
        section = load_snapshot(snapshot_path).get("experiment") or {}
    kind = args.kind or section.get("kind")
    if kind is None:
        logger.error("cannot tell the experiment kind of %s; pass --kind", log_path)
        return EXIT_USAGE
    try:
        exp = get_experiment(kind)
    except KeyError as exc:
        logger.error("%s", exc.args[0])
        return EXIT_USAGE
    if not exp.replayable:
        logger.error("%s runs do not write event logs", kind)
        return EXIT_USAGE
    params = dict(exp.defaults)
    params.update(section.get("params") or {})
    try:
        report = replay(read_event_log(log_path), kind, params)
    except (LvevoError, ValueError) as exc:
        logger.error("Replay failed: %s", exc)
        return EXIT_FAILURE
    if args.json:
        payload = {
            "kind": report.kind,
            "events": report.events,
            "violations": [{"line": v.line, "message": v.message} for v in report.violations],
        }
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(report.summary())
    return 0 if report.clean else EXIT_FAILURE


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    root = load_config(CONFIG_PATH) if CONFIG_PATH.is_file() else {}
    _setup_logging(root.get("logging") or {}, args.quiet)

    if args.command == "replay":
        return _replay(args)
    try:
        cfg = resolve_config(args, root)
    except ConfigError as exc:
        parser.print_usage(sys.stderr)
        logger.error("invalid configuration: %s", exc)
        return EXIT_USAGE
    return _run(cfg, args.json)


if __name__ == "__main__":
    sys.exit(main())
