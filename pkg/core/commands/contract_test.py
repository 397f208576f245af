"""
Contract test command.

Checks the contraction property of the sampled axis of a Morse element,
or of a flat wall square when the plane control is requested. The axis
is grown until its ends project at least C apart; a run in which no
pair had projections C apart is inconclusive.
"""

# Standard library imports
from typing import Any, Dict

# Local project imports
from core.algebra.word_parser import format_group_word
from core.commands.model_context import build_context
from core.commands.morse_subset import morse_axis, morse_word
from core.commands.protocols import (
    EXIT_ERROR,
    EXIT_PASS,
    EXIT_VIOLATION,
    CommandProtocol,
    CommandResult,
    ExperimentConfig,
)
from core.errors import UsageError
from core.logger import logger

CONTROLS = ("plane",)


class ContractTestCommand(CommandProtocol):
    """Contraction test on a Morse axis or the wall-plane control."""

    name = "contract test"

    def __repr__(self) -> str:
        return "ContractTestCommand()"

    def run(self, config: ExperimentConfig) -> CommandResult:
        if config.control is not None and config.control not in CONTROLS:
            raise UsageError(f"unknown control {config.control!r}")
        context = build_context(config)
        analyzer = context.analyzer
        report: Dict[str, Any] = {"command": self.name, "seed": config.seed}
        if config.control == "plane":
            wall = context.complex.walls_of(context.complex.root, 1)[0]
            subset = analyzer.wall_plane_subset(
                wall, float(config.radius), 0.5
            )
            C = config.contraction or subset.delta / 4
            report.update(
                {
                    "subset": "wall_plane",
                    "wall": repr(wall),
                    "diameter": subset.delta,
                }
            )
        else:
            subset, C = morse_axis(context, config)
            report.update(
                {
                    "subset": "morse_axis",
                    "word": format_group_word(morse_word(context, config)),
                    "steps": subset.steps,
                    "copies": len(subset.subtree),
                    "delta": subset.delta,
                    "epsilon": subset.epsilon,
                }
            )
        outcome = analyzer.check_contracting(
            subset, C, config.samples, config.seed
        )
        logger.info("Contraction test at C=%.4f: %r", C, outcome)
        report.update(
            {
                "C": C,
                "passed": outcome.passed,
                "measuredC": outcome.measured_c,
                "samples": outcome.samples,
                "checked_pairs": outcome.checked_pairs,
                "vacuous": outcome.vacuous,
            }
        )
        if not outcome.passed:
            report["witness"] = outcome.witness
            return CommandResult(EXIT_VIOLATION, report)
        if outcome.vacuous:
            logger.warning("No pair had projections %.4f apart", C)
            report["inconclusive"] = True
            return CommandResult(EXIT_ERROR, report)
        return CommandResult(EXIT_PASS, report)
