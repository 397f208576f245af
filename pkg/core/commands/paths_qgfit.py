"""
Paths qgfit command.

Fits the quasi-geodesic constant of special paths against the distance
oracle and checks that oracle distances respect both the L2 path length
and the wall-separation lower bound.
"""

# Standard library imports
from typing import Any, Dict, Optional

# Local project imports
from core.commands.model_context import build_context, config_value
from core.commands.protocols import (
    EXIT_PASS,
    EXIT_VIOLATION,
    CommandProtocol,
    CommandResult,
    ExperimentConfig,
)


class PathsQGFitCommand(CommandProtocol):
    """Fit kappa and audit oracle consistency per sample."""

    name = "paths qgfit"

    def __repr__(self) -> str:
        return "PathsQGFitCommand()"

    def run(self, config: ExperimentConfig) -> CommandResult:
        context = build_context(config)
        tolerance = float(str(config_value("tolerance", 1e-9)))
        fit = context.paths.qg_fit(
            config.samples,
            config.max_walls,
            config.resolution,
            config.seed,
            sampler=context.sampler,
            oracle=context.oracle,
        )
        witness: Optional[Dict[str, Any]] = None
        for row in fit.rows:
            slack = config.resolution * row["walls"]
            if row["length_l2"] < row["oracle"] - slack - tolerance:
                witness = {"check": "oracle above L2 length", **row}
            elif row["lower_bound"] > row["oracle"] + 1e-6:
                witness = {"check": "oracle below lower bound", **row}
            if witness is not None:
                break
        report: Dict[str, Any] = {
            "command": self.name,
            "seed": config.seed,
            "samples": fit.samples,
            "kappa": fit.kappa,
            "worst_ratio": fit.worst_ratio,
            "metric": fit.metric,
            "rho": float(context.paths.rho),
            "passed": witness is None,
            "rows": fit.rows,
        }
        if witness is not None:
            report["witness"] = witness
            return CommandResult(EXIT_VIOLATION, report)
        return CommandResult(EXIT_PASS, report)
