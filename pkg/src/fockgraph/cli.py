"""Command-line entry point.

``verify`` runs one configured experiment, or the default five-experiment
suite when no config is given.  Exit codes: 0 all pass, 1 verification
failure, 2 config error, 3 internal error.
"""

from __future__ import annotations

import argparse
import os
import sys

from .config import ConfigError, EXPERIMENTS, default_config, default_suite, parse_config
from .report import emit_report, render_csv, render_json
from .runner import run_experiment

__all__ = ["main"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="verify",
        description="Verify resolutions of identity, projections and anticliques "
        "of displaced-projector operator graphs on truncated Fock spaces.",
    )
    parser.add_argument("--config", help="path to a JSON experiment config")
    parser.add_argument("--experiment", choices=EXPERIMENTS, help="experiment to run (overrides the config)")
    parser.add_argument("--out", help="write the report(s) to this path")
    parser.add_argument("--format", choices=("json", "csv"), default="json", help="report format")
    parser.add_argument("--cutoff", type=int, help="override the per-mode cutoff")
    parser.add_argument("--seed", type=int, help="override the random seed")
    parser.add_argument("--quiet", action="store_true", help="suppress per-experiment summary lines")
    return parser


def _load_configs(args) -> list:
    overrides = {}
    if args.cutoff is not None:
        overrides["cutoff"] = args.cutoff
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.experiment is not None:
        overrides["experiment"] = args.experiment

    if args.config is not None:
        return [parse_config(args.config, overrides)]
    if args.experiment is not None:
        return [default_config(args.experiment, overrides)]
    overrides.pop("experiment", None)
    return default_suite(overrides)


def _out_path(base: str, experiment: str, multiple: bool) -> str:
    if not multiple:
        return base
    stem, ext = os.path.splitext(base)
    return f"{stem}_{experiment}{ext or '.json'}"


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        configs = _load_configs(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    reports = []
    try:
        for cfg in configs:
            reports.append(run_experiment(cfg))
    except Exception as exc:  # no result may masquerade as a pass
        print(f"internal error: {exc}", file=sys.stderr)
        return 3

    try:
        multiple = len(reports) > 1
        for report in reports:
            if args.out:
                emit_report(report, _out_path(args.out, report.experiment, multiple), args.format)
            if not args.quiet:
                verdict = "PASS" if report.passed else "FAIL"
                line = (
                    f"{report.experiment}: {verdict} "
                    f"max_abs={report.max_abs_deviation:.3e} "
                    f"frobenius={report.frobenius_deviation:.3e} "
                    f"tolerance={report.tolerance:.1e}"
                )
                print(line)
            if not args.quiet and not args.out:
                render = render_csv if args.format == "csv" else render_json
                print(render(report), end="")
    except OSError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3

    return 0 if all(report.passed for report in reports) else 1


if __name__ == "__main__":
    raise SystemExit(main())
