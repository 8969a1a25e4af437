"""Command-line entry point for the rwflow bench."""
import argparse
import logging
import os
import sys
from typing import Dict, List, Optional

from dotenv import load_dotenv

from .core.workflow import BenchWorkflow
from .errors import ConfigError, DegenerateInputError, ParameterError, PpmFormatError, QuotaError
from .utils.config import PROFILES, Experiment, load_config

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_QUOTA = 4

logger = logging.getLogger("rwflow")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value experiment config file")
    common.add_argument("--out", help="output CSV path ('-' for stdout)")
    common.add_argument("--jobs", type=int, help="worker processes for independent trials")
    common.add_argument("--profile", choices=sorted(PROFILES), help="desk or paper scale preset")
    common.add_argument("--seed", type=lambda s: int(s, 0), help="base seed (unsigned 64-bit)")
    common.add_argument(
        "--set", action="append", default=[], metavar="KEY=VALUE",
        help="override any config key, e.g. --set solver.T=50 (repeatable)",
    )
    common.add_argument("--log-level", help="logging level (default: $RWFLOW_LOG_LEVEL or INFO)")

    parser = argparse.ArgumentParser(
        prog="rwflow",
        description="Phase retrieval bench: RWF against WF and TWF-lite.",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    for experiment in Experiment:
        commands.add_parser(
            experiment.value, parents=[common], help=f"run the {experiment.value} experiment"
        )
    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, str]:
    overrides: Dict[str, str] = {}
    for item in args.set:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        overrides[key.strip()] = value
    overrides["experiment"] = args.command
    if args.out is not None:
        overrides["output_path"] = args.out
    if args.jobs is not None:
        overrides["jobs"] = str(args.jobs)
    if args.seed is not None:
        overrides["base_seed"] = str(args.seed)
    return overrides


def _environment_defaults() -> Dict[str, str]:
    defaults = {}
    jobs = os.getenv("RWFLOW_JOBS")
    if jobs:
        defaults["jobs"] = jobs
    return defaults


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run the experiment and map failures to exit codes."""
    load_dotenv()
    args = build_parser().parse_args(argv)

    level = (args.log_level or os.getenv("RWFLOW_LOG_LEVEL") or "INFO").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        config = load_config(args.config, args.profile, _overrides(args), _environment_defaults())
        BenchWorkflow(config).run()
    except (ConfigError, ParameterError, DegenerateInputError) as e:
        logger.error("configuration error: %s", e)
        return EXIT_CONFIG
    except (OSError, PpmFormatError) as e:
        logger.error("I/O error: %s", e)
        return EXIT_IO
    except QuotaError as e:
        logger.error("quota not met: %s", e)
        return EXIT_QUOTA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
