"""
Contract radius command.

Measures how far certified quasi-geodesics with endpoints on a Morse
axis stray from it, against the bound implied by the contraction and
projection constants.
"""

# Standard library imports
from typing import Any, Dict

# Local project imports
from core.commands.model_context import build_context
from core.commands.morse_subset import morse_subset
from core.commands.protocols import (
    EXIT_PASS,
    EXIT_VIOLATION,
    CommandProtocol,
    CommandResult,
    ExperimentConfig,
)
from core.geometry.ps_contraction import ContractionParams


class ContractRadiusCommand(CommandProtocol):
    """Quasiconvexity radius of a Morse axis."""

    name = "contract radius"

    def __repr__(self) -> str:
        return "ContractRadiusCommand()"

    def run(self, config: ExperimentConfig) -> CommandResult:
        context = build_context(config)
        analyzer = context.analyzer
        subset = morse_subset(context, config)
        C = config.contraction or analyzer.contraction_constant(subset)
        ceiling = ContractionParams.build(C, max(C, 1.0), config.lam)
        ball = analyzer.ball_projection_check(
            subset, ceiling, config.samples, config.seed
        )
        params = ContractionParams.build(
            C, max(ball.least_k, 1.0), config.lam
        )
        outcome = analyzer.quasiconvexity_radius(
            subset, config.lam, params, config.samples, config.seed
        )
        report: Dict[str, Any] = {
            "command": self.name,
            "seed": config.seed,
            "samples": config.samples,
            "lambda": config.lam,
            "C": C,
            "k": params.k,
            "cbar": params.cbar,
            "R": params.R,
            "ball_passed": ball.passed,
            "ball_tested": ball.tested,
            "ball_skipped": ball.skipped,
            "ball_least_k": ball.least_k,
            "measured": outcome.measured,
            "bound": outcome.bound,
            "certified": outcome.certified,
            "discarded": outcome.discarded,
            "passed": outcome.passed and ball.passed,
        }
        if not ball.passed:
            report["witness"] = ball.witness
            return CommandResult(EXIT_VIOLATION, report)
        if not outcome.passed:
            report["witness"] = outcome.witness
            return CommandResult(EXIT_VIOLATION, report)
        return CommandResult(EXIT_PASS, report)
