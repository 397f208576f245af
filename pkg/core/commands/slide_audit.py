"""
Slide audit command.

Samples (x, y, z) with y on a wall between the copies of x and z and
checks that sliding y to the foot of x never lengthens the L1 path.
"""

# Standard library imports
from typing import Any, Dict, Tuple

# Third-party imports
import numpy as np

# Local project imports
from core.commands.model_context import build_context, config_value
from core.commands.protocols import (
    EXIT_PASS,
    EXIT_VIOLATION,
    CommandProtocol,
    CommandResult,
    ExperimentConfig,
)
from core.geometry.special_paths import slide_defects
from core.sampling import parallel_map, spawn_generators


class SlideAuditCommand(CommandProtocol):
    """Horizontal-slide defects over random triples."""

    name = "slide audit"

    def __repr__(self) -> str:
        return "SlideAuditCommand()"

    def run(self, config: ExperimentConfig) -> CommandResult:
        context = build_context(config)
        sampler = context.sampler
        tolerance = float(str(config_value("tolerance", 1e-9)))

        def triple(rng: np.random.Generator) -> Tuple[Any, Any, Any]:
            copy = sampler.random_copy(rng)
            wall = sampler.random_wall(rng, copy)
            y = sampler.random_wall_point(rng, copy, wall)
            x = sampler.random_point(rng, copy)
            z = sampler.random_point(rng, context.complex.neighbor_copy(wall))
            return x, y, z

        triples = parallel_map(
            triple, spawn_generators(config.seed, config.samples)
        )
        defects = slide_defects(context.paths, triples)
        rows = [
            {
                "sample": index,
                "x": repr(x),
                "y": repr(y),
                "z": repr(z),
                "defect": defect,
            }
            for index, ((x, y, z), defect) in enumerate(zip(triples, defects))
        ]
        worst = max((float(d) for d in defects), default=0.0)
        report: Dict[str, Any] = {
            "command": self.name,
            "seed": config.seed,
            "samples": config.samples,
            "max_defect": max(defects, default=0),
            "passed": worst <= tolerance,
            "rows": rows,
        }
        if worst > tolerance:
            report["witness"] = next(
                row for row in rows if float(row["defect"]) > tolerance
            )
            return CommandResult(EXIT_VIOLATION, report)
        return CommandResult(EXIT_PASS, report)
