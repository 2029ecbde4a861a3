"""Command line entry point.

Subcommands mirror the pipeline stages:

    symest simulate --config run.cfg --out results
    symest estimate --config run.cfg --out results
    symest polish   --config run.cfg --out results
    symest full     --config run.cfg --seed 7 --out results
    symest report   --out results

Without --config the reference-study defaults are used.  --seed, --out and
--workers override the corresponding config keys.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from . import _backend, pipeline
from .errors import SymestError
from .pipeline import RunConfig


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symest",
        description="Estimate a quadratic map's parameter and initial "
                    "condition from a censored binary symbolic sequence.")
    parser.add_argument("--version", action="store_true",
                        help="print version and active kernel backend")
    sub = parser.add_subparsers(dest="command")
    for name, text in (
            ("simulate", "generate bits.txt and cells.csv"),
            ("estimate", "grid zoom, anchor selection, inverse refinement"),
            ("polish", "high-precision chain on refined cells"),
            ("full", "simulate + estimate + polish + report"),
            ("report", "re-render report.txt from existing artifacts")):
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", help="path to a key = value config file")
        p.add_argument("--seed", type=int, help="override the master seed")
        p.add_argument("--out", help="override the output directory")
        p.add_argument("--workers", type=int,
                       help="parallel workers for grid evaluation")
    return parser


def _load_config(args) -> RunConfig:
    config = (pipeline.load_config_file(args.config)
              if args.config else RunConfig())
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.out is not None:
        overrides["output_dir"] = args.out
    if args.workers is not None:
        overrides["workers"] = args.workers
    if overrides:
        config = dataclasses.replace(config, **overrides)
    return config


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.version:
        from . import __version__
        print(f"symest {__version__} (kernels: {_backend.active_backend()})")
        return 0
    if args.command is None:
        _build_parser().print_help()
        return 2
    config = _load_config(args)
    try:
        return _dispatch(args.command, config)
    except SymestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _dispatch(command: str, config: RunConfig) -> int:
    out = config.output_dir
    if command == "simulate":
        bits = pipeline.cmd_simulate(config)
        print(f"wrote {len(bits)} bits to {out}/bits.txt")
    elif command == "estimate":
        bits = pipeline.load_bits(out)
        est = pipeline.cmd_estimate(config, bits)
        print(f"theta_star = {est.zoom.theta_star!r}  kappa = {est.kappa}")
    elif command == "polish":
        result = pipeline.cmd_polish_from_artifacts(config)
        print(f"theta_hat = {result.theta_hat!r}  y0_hat = {result.y0_hat!r}")
    elif command == "full":
        report = pipeline.cmd_full(config)
        print(report.render())
    elif command == "report":
        print(pipeline.cmd_report(out))
    return 0


if __name__ == "__main__":
    sys.exit(main())
