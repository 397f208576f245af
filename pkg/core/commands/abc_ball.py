"""
Abc ball command.

For random g outside a cyclic subgroup H, lists the powers of the
generator up to --radius whose conjugate by g stays in H. For an
aperiodic monodromy H = <t^m z> has height at most |m|, and when
|m| = 1 it is malnormal: every list must then be empty. For |m| > 1
hits are expected (t conjugates <t^2> to itself) and only the height
bound is reported.
"""

# Standard library imports
from typing import Any, Dict

# Third-party imports
import numpy as np

# Local project imports
from core.algebra.abelian_by_cyclic import (
    AbcElement,
    AbelianByCyclicGroup,
    ball_conjugate_intersection,
    height_bound_cyclic,
    periodic_order,
)
from core.commands.abc_analyze import matrix_from
from core.commands.protocols import (
    EXIT_PASS,
    EXIT_VIOLATION,
    CommandProtocol,
    CommandResult,
    ExperimentConfig,
)
from core.sampling import parallel_map, spawn_generators

ENTRY_RANGE = 3


class AbcBallCommand(CommandProtocol):
    """Conjugate intersections of <h> for random g."""

    name = "abc ball"

    def __repr__(self) -> str:
        return "AbcBallCommand()"

    def run(self, config: ExperimentConfig) -> CommandResult:
        phi = matrix_from(config)
        group = AbelianByCyclicGroup(phi)
        if config.gens:
            generator = AbcElement.parse(config.gens[0])
        else:
            generator = group.t()
        conjugators = [AbcElement.parse(text) for text in config.gens[1:]]

        def draw(rng: np.random.Generator) -> AbcElement:
            return AbcElement(
                int(rng.integers(-ENTRY_RANGE, ENTRY_RANGE + 1)),
                tuple(
                    int(v)
                    for v in rng.integers(
                        -ENTRY_RANGE, ENTRY_RANGE + 1, size=phi.k
                    )
                ),
            )

        if not conjugators:
            conjugators = parallel_map(
                draw, spawn_generators(config.seed, config.samples)
            )
        aperiodic = periodic_order(phi) is None
        m = abs(generator.t_exp)
        malnormal = aperiodic and m == 1
        rows = []
        witness = None
        for index, g in enumerate(conjugators):
            inside = group.cyclic_exponent(g, generator) is not None
            hits = ball_conjugate_intersection(
                phi, generator, g, config.radius
            )
            rows.append(
                {
                    "sample": index,
                    "g": g.literal(),
                    "in_subgroup": inside,
                    "hits": hits,
                }
            )
            if witness is None and malnormal and not inside and hits:
                witness = {"g": g.literal(), "powers": hits}
        report: Dict[str, Any] = {
            "command": self.name,
            "seed": config.seed,
            "matrix": [list(row) for row in phi.rows],
            "generator": generator.literal(),
            "radius": config.radius,
            "aperiodic": aperiodic,
            "malnormal": malnormal,
            "height_bound": (
                height_bound_cyclic(phi, m) if aperiodic and m else None
            ),
            "passed": witness is None,
            "rows": rows,
        }
        if witness is not None:
            report["witness"] = witness
            return CommandResult(EXIT_VIOLATION, report)
        return CommandResult(EXIT_PASS, report)
