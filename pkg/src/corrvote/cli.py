"""Command-line interface: reproduce paper figures, run custom scenarios, sweep.

Exit codes: 0 success, 1 I/O failure, 2 usage or validation error. The
default master seed comes from --seed, then the config file, then the
CORRVOTE_SEED environment variable, then the built-in default.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
from pathlib import Path

from .core import UsageError
from .config import load_config
from .experiments import (
    DEFAULT_SEED,
    FIGURE_IDS,
    SWEEP_PARAMETERS,
    SweepResult,
    render_csv,
    render_diagnostics_csv,
    reproduce_figure,
    run_scenario,
    sweep,
)

_INT_PARAMETERS = {"group_size", "n_independent", "m"}


def _env_seed() -> int:
    raw = os.environ.get("CORRVOTE_SEED", "")
    if not raw:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError as exc:
        raise UsageError(f"CORRVOTE_SEED must be an integer, got {raw!r}") from exc


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _emit(
    results: list[SweepResult], out_path: Path, diagnostics: bool
) -> None:
    _write(out_path, render_csv(results))
    if diagnostics:
        side = out_path.with_name(out_path.stem + "_diagnostics.csv")
        _write(side, render_diagnostics_csv(results))


def _summary(results: list[SweepResult]) -> str:
    points = len(results)
    names = results[0].rules
    parts = []
    for name in names:
        mean = sum(r.stats[name].mean_relative_utility for r in results) / points
        parts.append(f"{name}={mean:.4f}")
    label = "point" if points == 1 else "points"
    return f"{points} {label}; mean relative utility: " + "  ".join(parts)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--trials", type=int, default=None, help="trials per point")
    parser.add_argument("--seed", type=int, default=None, help="master seed")
    parser.add_argument("--workers", type=int, default=1, help="parallel workers")
    parser.add_argument(
        "--diagnostics",
        action="store_true",
        help="also write a *_diagnostics.csv sidecar (k-hat histogram, weight flags)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corrvote",
        description="Score aggregation under correlated noise: experiment runner.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    rep = sub.add_parser("reproduce", help="rerun a built-in figure experiment")
    rep.add_argument("figure", choices=FIGURE_IDS)
    rep.add_argument("--out", default=".", help="output directory")
    _add_common(rep)

    run = sub.add_parser("run", help="run one scenario from a config file")
    run.add_argument("config", help="TOML scenario file")
    run.add_argument("--out", default="scenario.csv", help="output CSV path")
    _add_common(run)

    swp = sub.add_parser("sweep", help="sweep one parameter over a config file")
    swp.add_argument("config", help="TOML scenario file")
    swp.add_argument("--param", required=True, choices=SWEEP_PARAMETERS)
    swp.add_argument(
        "--values", required=True, help="comma-separated parameter values"
    )
    swp.add_argument("--out", default="sweep.csv", help="output CSV path")
    _add_common(swp)

    sub.add_parser("list-rules", help="print the canonical rule names")
    return parser


def _parse_values(raw: str, parameter: str) -> list[float | int]:
    cast = int if parameter in _INT_PARAMETERS else float
    try:
        return [cast(part) for part in raw.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise UsageError(f"--values must be comma-separated numbers: {exc}") from exc


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "list-rules":
            from .rules import RULE_NAMES, TRAINED_RULES

            for name in RULE_NAMES:
                suffix = "  (trained)" if name in TRAINED_RULES else ""
                print(f"{name}{suffix}")
            return 0

        if args.command == "reproduce":
            seed = args.seed if args.seed is not None else _env_seed()
            trials = args.trials if args.trials is not None else 10000
            results = reproduce_figure(
                args.figure, trials=trials, seed=seed, workers=args.workers
            )
            out = Path(args.out) / f"{args.figure}.csv"
            _emit(results, out, args.diagnostics)
            print(f"{args.figure}: wrote {out}; {_summary(results)}")
            return 0

        config = load_config(args.config, default_seed=_env_seed())
        if args.seed is not None:
            config = dataclasses.replace(config, master_seed=args.seed)
        if args.trials is not None:
            config = dataclasses.replace(config, n_trials=args.trials)

        if args.command == "run":
            results = [run_scenario(config, workers=args.workers)]
        else:
            values = _parse_values(args.values, args.param)
            results = sweep(config, args.param, values, workers=args.workers)
        out = Path(args.out)
        _emit(results, out, args.diagnostics)
        print(f"wrote {out}; {_summary(results)}")
        return 0
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
