"""
Paths sample command.

Builds special paths between random endpoints and checks, coordinate
by coordinate, that reversing the endpoints reverses the breakpoints
and that the path between two breakpoints is the matching stretch of
breakpoints.
"""

# Standard library imports
from typing import Any, Dict, List, Optional, Tuple

# Third-party imports
import numpy as np

# Local project imports
from core.commands.model_context import ModelContext, build_context
from core.commands.protocols import (
    EXIT_PASS,
    EXIT_VIOLATION,
    CommandProtocol,
    CommandResult,
    ExperimentConfig,
)
from core.geometry.metrics import L1Metric
from core.logger import logger
from core.sampling import parallel_map, spawn_generators


def audit_path(
    context: ModelContext, x: Any, y: Any
) -> Tuple[Dict[str, Any], Optional[Dict[str, Any]]]:
    """Row for one sampled path and the first axiom failure, if any."""
    paths = context.paths
    path = paths.special_path(x, y)
    points = path.breakpoints
    witness: Optional[Dict[str, Any]] = None
    backwards = paths.special_path(y, x).breakpoints
    if tuple(reversed(backwards)) != points:
        witness = {
            "axiom": "reversal",
            "x": repr(x),
            "y": repr(y),
            "forward": [repr(p) for p in points],
            "backward": [repr(p) for p in backwards],
        }
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if witness is not None:
                break
            stretch = paths.special_path(points[i], points[j]).breakpoints
            if stretch != points[i : j + 1]:
                witness = {
                    "axiom": "restriction",
                    "x": repr(x),
                    "y": repr(y),
                    "from": i,
                    "to": j,
                    "expected": [repr(p) for p in points[i : j + 1]],
                    "found": [repr(p) for p in stretch],
                }
    row = {
        "x": repr(x),
        "y": repr(y),
        "walls": path.wall_count,
        "length_l1": float(paths.path_length(path, L1Metric())),
        "length_l2": float(paths.path_length(path)),
        "lower_bound": float(paths.distance_lower_bound(x, y)),
        "axioms_hold": witness is None,
    }
    return row, witness


class PathsSampleCommand(CommandProtocol):
    """Sample special paths and audit the path-system axioms."""

    name = "paths sample"

    def __repr__(self) -> str:
        return "PathsSampleCommand()"

    def run(self, config: ExperimentConfig) -> CommandResult:
        context = build_context(config)

        def sample(
            job: Tuple[int, np.random.Generator]
        ) -> Tuple[Dict[str, Any], Optional[Dict[str, Any]]]:
            index, rng = job
            x, y = context.sampler.random_pair(rng, config.max_walls)
            row, witness = audit_path(context, x, y)
            row["sample"] = index
            return row, witness

        results = parallel_map(
            sample, enumerate(spawn_generators(config.seed, config.samples))
        )
        rows: List[Dict[str, Any]] = [row for row, _ in results]
        witnesses = [w for _, w in results if w is not None]
        report: Dict[str, Any] = {
            "command": self.name,
            "seed": config.seed,
            "samples": config.samples,
            "passed": not witnesses,
            "rows": rows,
        }
        if witnesses:
            logger.warning("Path axiom failed on %d samples", len(witnesses))
            report["witness"] = witnesses[0]
            return CommandResult(EXIT_VIOLATION, report)
        return CommandResult(EXIT_PASS, report)
