"""Command-line entry points.

Exit codes: 0 on success, 2 when the inputs are invalid (bad config, bad
arguments, missing files), 1 when a run fails after validation.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

from ..errors import ValidationError
from ..groups import CyclicGroup, parse_group
from ..predictions import predict_sync_loss, z2_mismatch_exact
from .config import parse_sweep_config, parse_universality_config
from .report import (load_sweep_report, write_sweep_csv, write_sweep_json,
                     write_universality_csv, write_universality_json)
from .svgplot import write_sweep_svg
from .sweep import run_sweep
from .universality import run_universality_config


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spikesim",
        description="Spiked-matrix synchronization experiments and limit predictions.")
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="run a theta sweep from a config file")
    sweep.add_argument("config")
    sweep.add_argument("--seed", type=int, default=None,
                       help="override master_seed from the config")
    sweep.add_argument("--out-dir", default=None,
                       help="override out_dir from the config")
    sweep.add_argument("--format", choices=("csv", "json", "both"), default="both")
    sweep.add_argument("--workers", type=int, default=1)

    univ = sub.add_parser("universality",
                          help="run an ensemble A/B comparison from a config file")
    univ.add_argument("config")
    univ.add_argument("--seed", type=int, default=None)
    univ.add_argument("--out-dir", default=None)
    univ.add_argument("--format", choices=("csv", "json", "both"), default="both")
    univ.add_argument("--workers", type=int, default=1)

    predict = sub.add_parser("predict", help="evaluate the limit prediction once")
    predict.add_argument("--group", required=True, help="Z/L or U(1)")
    predict.add_argument("--theta", type=float, required=True)
    predict.add_argument("--loss", default=None, help="mismatch or one-minus-cos")
    predict.add_argument("--round", default=None, dest="rounding",
                         help="nearest-character or phase")
    predict.add_argument("--samples", type=int, default=1_000_000)
    predict.add_argument("--seed", type=int, default=0)

    plot = sub.add_parser("plot", help="render sweep report JSON files to SVG")
    plot.add_argument("reports", nargs="+", metavar="report.json")
    plot.add_argument("--out", default=None, help="output SVG path")
    return parser


def _cmd_sweep(args) -> int:
    config = parse_sweep_config(args.config).with_overrides(
        out_dir=args.out_dir, master_seed=args.seed)
    report = run_sweep(config, workers=args.workers)
    os.makedirs(config.out_dir, exist_ok=True)
    written = []
    if args.format in ("csv", "both"):
        path = os.path.join(config.out_dir, "report.csv")
        write_sweep_csv(report, path)
        written.append(path)
    if args.format in ("json", "both"):
        path = os.path.join(config.out_dir, "report.json")
        write_sweep_json(report, path)
        written.append(path)
    svg_path = os.path.join(config.out_dir, "report.svg")
    write_sweep_svg(report, svg_path)
    written.append(svg_path)
    for summary in report.summaries:
        print(f"theta={summary.theta:g} empirical={summary.empirical_mean:.4f}"
              f"(std {summary.empirical_std:.4f}) "
              f"predicted={summary.prediction_mean:.4f}"
              f"(stderr {summary.prediction_stderr:.1e})")
    for path in written:
        print(f"wrote {path}")
    return 0


def _cmd_universality(args) -> int:
    config = parse_universality_config(args.config)
    if args.seed is not None:
        config = replace(config, master_seed=args.seed)
    if args.out_dir is not None:
        config = replace(config, out_dir=args.out_dir)
    report = run_universality_config(config, workers=args.workers)
    os.makedirs(config.out_dir, exist_ok=True)
    written = []
    if args.format in ("csv", "both"):
        path = os.path.join(config.out_dir, "universality.csv")
        write_universality_csv(report, path)
        written.append(path)
    if args.format in ("json", "both"):
        path = os.path.join(config.out_dir, "universality.json")
        write_universality_json(report, path)
        written.append(path)
    print(f"pairs={len(report.pairs)} max|diff|={report.max_abs_diff:.5f} "
          f"max sigma={report.max_sigma:.2f}")
    for path in written:
        print(f"wrote {path}")
    return 0


def _cmd_predict(args) -> int:
    group = parse_group(args.group)
    estimate = predict_sync_loss(group, args.theta, rounding=args.rounding,
                                 loss=args.loss, n_samples=args.samples,
                                 seed=args.seed)
    print(f"{estimate.label} theta={args.theta:g}")
    print(f"mean={estimate.mean!r} stderr={estimate.stderr!r} "
          f"n_samples={estimate.n_samples}")
    if (isinstance(group, CyclicGroup) and group.order == 2
            and (args.loss is None or args.loss == "mismatch")):
        print(f"closed_form={z2_mismatch_exact(args.theta)!r}")
    return 0


def _cmd_plot(args) -> int:
    reports = [load_sweep_report(path) for path in args.reports]
    out = args.out
    if out is None:
        base, _ = os.path.splitext(args.reports[0])
        out = base + ".svg"
    write_sweep_svg(reports, out)
    print(f"wrote {out}")
    return 0


_COMMANDS = {"sweep": _cmd_sweep, "universality": _cmd_universality,
             "predict": _cmd_predict, "plot": _cmd_plot}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValidationError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failure after validation
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
