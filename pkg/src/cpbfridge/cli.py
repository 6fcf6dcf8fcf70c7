"""Command-line entry point.

    cpbfridge <experiment> [--config FILE] [--out DIR] [--threads N] [--seed N]

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""
import argparse
import json
import sys

from . import __version__
from .config import EXPERIMENTS, RunConfig, load_config
from .errors import ConfigError, NumericalError
from .experiments import run_experiment

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3


def build_parser():
    parser = argparse.ArgumentParser(prog="cpbfridge", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"cpbfridge {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name.replace("_", "-"), help=f"run the {name} preset")
        p.add_argument("--config", help="YAML run configuration (defaults used if omitted)")
        p.add_argument("--out", help="output directory (overrides output_dir)")
        p.add_argument("--threads", type=int, default=1, help="worker threads for sweeps")
        p.add_argument("--seed", type=int, help="noise seed (overrides config)")
    return parser


def _fail(code, kind, message, experiment):
    print(json.dumps({"error": kind, "message": message, "experiment": experiment}), file=sys.stderr)
    return code


def main(argv=None):
    args = build_parser().parse_args(argv)
    experiment = args.command.replace("-", "_")
    try:
        cfg = load_config(args.config) if args.config else RunConfig()
        if args.config and cfg.experiment != experiment:
            # the subcommand decides what runs; the file only supplies parameters
            cfg = cfg.replace(experiment=experiment)
        cfg.experiment = experiment
        if args.seed is not None:
            if args.seed < 0:
                raise ConfigError("--seed must be non-negative")
            cfg.seed = args.seed
        if args.threads < 1:
            raise ConfigError("--threads must be at least 1")
    except (ConfigError, OSError) as exc:
        return _fail(EXIT_CONFIG, type(exc).__name__, str(exc), experiment)
    try:
        out, csv_path, svg_path = run_experiment(cfg, threads=args.threads, out_dir=args.out)
    except NumericalError as exc:
        return _fail(EXIT_NUMERICAL, type(exc).__name__, str(exc), experiment)
    except (ValueError, ArithmeticError) as exc:
        return _fail(EXIT_NUMERICAL, type(exc).__name__, str(exc), experiment)
    failed = sum(1 for k in out.table.notes if k.startswith("error_row_"))
    print(csv_path)
    print(svg_path)
    if failed:
        print(f"warning: {failed} sweep point(s) failed; see flagged rows", file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
