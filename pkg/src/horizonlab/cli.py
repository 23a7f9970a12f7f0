"""horizonlab command line.

    horizonlab <experiment> [--config FILE] [--set key=value ...] [--out DIR] [--seed N]
               [--threads N] [--plot] [--no-cache] [--debug]

Exit codes: 0 success, 2 validation error, 3 numerical failure, 4 I/O error.
"""
import argparse
import sys
from typing import List, Optional

from horizonlab import __version__
from horizonlab.api import Harness
from horizonlab.components.experiments import CORE_EXPERIMENTS
from horizonlab.error import EXIT_OK, onerror
from horizonlab.exceptions import ConfigValidationError
from horizonlab.runconfig import ExperimentConfig


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="horizonlab",
        description="Prediction horizons of approximate quantum evolution and their cost.",
    )
    parser.add_argument("experiment", choices=sorted(CORE_EXPERIMENTS),
                        help="experiment to run")
    parser.add_argument("--config", metavar="FILE",
                        help="TOML configuration, its experiment key must match")
    parser.add_argument("--set", dest="sets", action="append", default=[], metavar="KEY=VALUE",
                        help="parameter override, TOML syntax, repeatable")
    parser.add_argument("--out", metavar="DIR", help="output directory")
    parser.add_argument("--seed", type=int, help="random seed")
    parser.add_argument("--threads", type=int, default=1, help="worker threads for scan points")
    parser.add_argument("--plot", action="store_true", help="emit matplotlib scripts")
    parser.add_argument("--no-cache", dest="use_cache", action="store_false",
                        help="do not read or write the spectrum cache")
    parser.add_argument("--debug", action="store_true", help="debug logging")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return parser


def load_config(args: argparse.Namespace) -> ExperimentConfig:
    """Configuration file, if any, with command line flags applied over it."""
    if args.config:
        cfg = ExperimentConfig.load(args.config)
        if cfg.experiment != args.experiment:
            raise ConfigValidationError(
                f"{args.config} configures '{cfg.experiment}', not '{args.experiment}'.",
                ("experiment",),
            )
    else:
        cfg = ExperimentConfig(experiment=args.experiment, output_dir=f"results/{args.experiment}")
    return cfg.with_overrides(args.sets, seed=args.seed, output_dir=args.out)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        harness = Harness(debug=args.debug, threads=args.threads, use_cache=args.use_cache)
        manifest = harness.run(load_config(args), plot=args.plot)
    except Exception as exc:  # pylint: disable=broad-exception-caught
        error = onerror(exc)
        print(error, file=sys.stderr)
        return error.code
    for name, digest in manifest.files.items():
        print(f"{digest}  {name}")
    return EXIT_OK
