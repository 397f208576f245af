"""
Experiment runner.

Parses the command line into an ExperimentConfig, runs the command and
maps failures to exit codes: 0 pass, 2 property violation, 1 usage, IO,
spec errors and inconclusive experiments.
"""

# Standard library imports
import argparse
import sys
from typing import List, Optional, Sequence

# Local project imports
from config.settings import CONFIG_FILE_PATH
from core.command_handler import COMMAND_CLASSES, CommandHandler
from core.commands.protocols import EXIT_ERROR, ExperimentConfig
from core.config_loader import get_config_value
from core.errors import QCLabError
from core.logger import logger
from core.report_writer import FORMATS


class ArgumentError(Exception):
    """argparse rejected the command line."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise ArgumentError(message)


def build_parser() -> argparse.ArgumentParser:
    """Command line parser; defaults come from the YAML configuration."""

    def default(key: str, fallback: object) -> object:
        return get_config_value(CONFIG_FILE_PATH, key, default=fallback)

    groups = sorted({name.split()[0] for name in COMMAND_CLASSES})
    parser = _Parser(
        prog="run_qclab.py",
        description="Desk-scale experiments on flip manifold groups.",
    )
    parser.add_argument("group", choices=groups)
    parser.add_argument("action")
    parser.add_argument(
        "target",
        nargs="?",
        help="spec path for 'model validate', matrix literal for 'abc'",
    )
    parser.add_argument("--spec", default=default("default_spec", None))
    parser.add_argument(
        "--seed", type=int, default=default("default_seed", 0)
    )
    parser.add_argument(
        "--samples", type=int, default=default("default_samples", 200)
    )
    parser.add_argument(
        "--radius", type=int, default=default("default_radius", 4)
    )
    parser.add_argument(
        "--resolution",
        type=float,
        default=default("default_resolution", 0.25),
    )
    parser.add_argument("--out", default=None)
    parser.add_argument("--format", dest="fmt", choices=FORMATS)
    parser.add_argument("--word", default=None)
    parser.add_argument("--lambda", dest="lam", type=float, default=2.0)
    parser.add_argument("--gens", nargs="+", default=[])
    parser.add_argument("--control", default=None)
    parser.add_argument("--max-walls", type=int, default=8)
    parser.add_argument(
        "--steps", type=int, default=default("morse_steps", 4)
    )
    parser.add_argument("-C", "--contraction", type=float, default=None)
    return parser


class ExperimentRunner:
    """
    Run one command line.

    Attributes:
        argv (List[str]): Arguments without the program name.
    """

    def __init__(self, argv: Optional[Sequence[str]] = None) -> None:
        self.argv = list(sys.argv[1:] if argv is None else argv)

    def __repr__(self) -> str:
        return f"ExperimentRunner({self.argv!r})"

    def parse(self) -> ExperimentConfig:
        """
        Build the ExperimentConfig for argv.

        Raises:
            ArgumentError: On arguments argparse rejects.
        """
        args = build_parser().parse_args(self.argv)
        command = f"{args.group} {args.action}"
        spec = args.spec
        if command == "model validate" and args.target:
            spec = args.target
        fmt = args.fmt
        if fmt is None:
            fmt = "csv" if args.out and args.out.endswith(".csv") else "json"
        return ExperimentConfig(
            command=command,
            spec=spec,
            seed=args.seed,
            samples=args.samples,
            radius=args.radius,
            resolution=args.resolution,
            out=args.out,
            fmt=fmt,
            target=args.target,
            word=args.word,
            lam=args.lam,
            gens=list(args.gens),
            control=args.control,
            max_walls=args.max_walls,
            steps=args.steps,
            contraction=args.contraction,
        )

    def run(self) -> int:
        """Run the command line and return the exit code."""
        try:
            config = self.parse()
            result, text = CommandHandler(config).handle()
        except ArgumentError as e:
            logger.error("Usage error: %s", e)
            return EXIT_ERROR
        except (QCLabError, OSError, ValueError) as e:
            logger.error("Experiment failed: %s", e)
            return EXIT_ERROR
        if not config.out:
            sys.stdout.write(text)
        return result.exit_code


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point for run_qclab.py."""
    return ExperimentRunner(argv).run()
