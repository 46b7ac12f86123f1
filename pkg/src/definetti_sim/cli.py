"""Command-line driver.

Exit status: 0 success, 1 model/runtime error, 2 usage or scenario error.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .core import UINT64_MAX, root_stream
from .errors import ScenarioError, SimulationError, ThetaListInvalid, UnknownPreset
from .montecarlo import run_once, sweep_threshold, validate_thetas
from .presets import PRESETS, preset
from .reporting import render_report, run_csv, summary_line, sweep_csv, sweep_summary, write_text
from .scenario import ScenarioConfig, parse_scenario, schema_text, serialize_scenario

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2
SEED_ENV = "DEFINETTI_SIM_SEED"


class UsageError(Exception):
    pass


def _seed(text: str) -> int:
    try:
        value = int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= value <= UINT64_MAX:
        raise argparse.ArgumentTypeError(f"seed must be in [0, 2^64-1], got {value}")
    return value


def _positive(text: str) -> int:
    try:
        value = int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def parse_thetas(text: str) -> tuple[int, ...]:
    parts = [p.strip() for p in text.split(",")]
    try:
        values = [int(p, 10) for p in parts]
    except ValueError:
        raise ThetaListInvalid(f"cannot parse theta list {text!r}") from None
    return validate_thetas(values)


def _load_config(args) -> ScenarioConfig:
    if args.scenario:
        try:
            text = Path(args.scenario).read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            raise UsageError(f"cannot read scenario {args.scenario}: {exc}") from None
        return parse_scenario(text)
    return preset(args.preset)


def _resolve_seed(args, config: ScenarioConfig) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env:
        try:
            return _seed(env)
        except argparse.ArgumentTypeError as exc:
            raise UsageError(f"{SEED_ENV}: {exc}") from None
    return config.seed


def _add_source(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--scenario", metavar="PATH", help="scenario file (.scn)")
    src.add_argument("--preset", metavar="NAME", help=f"one of: {', '.join(PRESETS)}")
    p.add_argument("--seed", type=_seed, help=f"root seed (fallback: ${SEED_ENV}, then the scenario's seed)")
    p.add_argument("--out", metavar="DIR", default=".", help="output directory (default: .)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="definetti-sim", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate one scenario for its full horizon")
    _add_source(run)
    run.add_argument("--format", choices=("csv", "report", "both"), default="both",
                     help="csv: run.csv; report: report.txt and run.png; both (default)")
    run.add_argument("--horizon", type=_positive,
                     help="rerun with a different (e.g. extended) horizon; a new run, never a continuation")
    run.add_argument("--rerun-seed", choices=("same", "fresh"), default="same",
                     help="with --horizon: reuse the root stream (same) or derive a new one (fresh)")

    sweep = sub.add_parser("sweep", help="rerun a scenario over consent thresholds")
    _add_source(sweep)
    sweep.add_argument("--thetas", help="comma-separated ascending thresholds (default: the scenario's sweep directive)")
    sweep.add_argument("--reps", type=_positive, help="replications per threshold (default: directive or 100)")
    sweep.add_argument("--workers", type=_positive, default=os.cpu_count() or 1,
                       help="worker processes (default: available cores); results do not depend on it")
    sweep.add_argument("--figures", action="store_true", help="also render sweep.png")

    sub.add_parser("presets", help="list preset names")
    show = sub.add_parser("show-preset", help="print a preset as a scenario file")
    show.add_argument("name")
    sub.add_parser("scenario-schema", help="print every scenario key with type, default and valid range")
    return parser


def cmd_run(args) -> int:
    config = _load_config(args)
    if config.sweep is not None:
        raise UsageError(f"scenario {config.name!r} is a sweep directive; use the 'sweep' command")
    seed = _resolve_seed(args, config)
    stream = root_stream(seed)
    if args.horizon is not None:
        config = replace(config, horizon=args.horizon)
        if args.rerun_seed == "fresh":
            stream = stream.derive("rerun").derive(str(args.horizon))
    report = run_once(config, stream=stream)
    out = Path(args.out)
    if args.format in ("csv", "both"):
        write_text(out / "run.csv", run_csv(report))
    if args.format in ("report", "both"):
        write_text(out / "report.txt", render_report(report))
        from .plotting import plot_run

        plot_run(report, out / "run.png")
    print(summary_line(report))
    return EXIT_OK


def cmd_sweep(args) -> int:
    config = _load_config(args)
    if args.thetas is not None:
        thetas = parse_thetas(args.thetas)
    elif config.sweep is not None:
        thetas = config.sweep.thetas
    else:
        raise UsageError("--thetas is required when the scenario has no sweep directive")
    reps = args.reps or (config.sweep.replications if config.sweep else 100)
    seed = _resolve_seed(args, config)
    result = sweep_threshold(replace(config, sweep=None), thetas, reps, seed, workers=args.workers)
    out = Path(args.out)
    write_text(out / "sweep.csv", sweep_csv(result))
    summary = sweep_summary(result)
    write_text(out / "sweep_summary.txt", summary)
    if args.figures:
        from .plotting import plot_sweep

        plot_sweep(result, out / "sweep.png")
    sys.stdout.write(summary)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "run":
            return cmd_run(args)
        if args.command == "sweep":
            return cmd_sweep(args)
        if args.command == "presets":
            print("\n".join(PRESETS))
            return EXIT_OK
        if args.command == "show-preset":
            sys.stdout.write(serialize_scenario(preset(args.name)))
            return EXIT_OK
        if args.command == "scenario-schema":
            sys.stdout.write(schema_text())
            return EXIT_OK
    except (ScenarioError, UnknownPreset, ThetaListInvalid, UsageError) as exc:
        print(f"definetti-sim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SimulationError, OSError) as exc:
        print(f"definetti-sim: runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    parser.error(f"unknown command {args.command}")
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
