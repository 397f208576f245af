"""
Orbit qi command.

Fits the orbit map of a subgroup generated by Morse words into the dual
tree on balls of radius r, r + 2 and r + 4. A generator conjugate into a
vertex group has a bounded orbit and is reported as a violation, as is a
fit whose constants drift across the radii.
"""

# Standard library imports
from typing import Any, Dict, List, Sequence

# Local project imports
from core.algebra.graph_of_groups import GraphOfGroups
from core.algebra.word_parser import format_group_word, parse_word
from core.commands.model_context import build_context
from core.commands.protocols import (
    EXIT_PASS,
    EXIT_VIOLATION,
    CommandProtocol,
    CommandResult,
    ExperimentConfig,
)
from core.errors import NotMorseError

DEFAULT_GENERATORS = [
    "v0: a ; t0 ; v1: a ; t0^-1",
    "v0: b ; t0 ; v1: b ; t0^-1",
]
RADIUS_OFFSETS = (0, 2, 4)
MAX_SPREAD = 0.2


def relative_spread(values: Sequence[float], floor: float = 0.0) -> float:
    """(max - min) / max, with max raised to floor."""
    top = max(max(values), floor)
    if top <= 0:
        return 0.0
    return (max(values) - min(values)) / top


class OrbitQICommand(CommandProtocol):
    """Free-basis check and two-sided orbit fit for --gens."""

    name = "orbit qi"

    def __repr__(self) -> str:
        return "OrbitQICommand()"

    def run(self, config: ExperimentConfig) -> CommandResult:
        context = build_context(config)
        group = GraphOfGroups(context.complex)
        literals: List[str] = config.gens or DEFAULT_GENERATORS
        generators = [parse_word(literal) for literal in literals]
        radii = [config.radius + offset for offset in RADIUS_OFFSETS]
        report: Dict[str, Any] = {
            "command": self.name,
            "generators": [format_group_word(g) for g in generators],
            "radius": config.radius,
        }
        try:
            fits = group.orbit_qi_fits(generators, radii, context.basepoint)
        except NotMorseError as error:
            report.update(
                {
                    "passed": False,
                    "witness": {
                        "reason": str(error),
                        "generator": format_group_word(error.witness),
                    },
                }
            )
            return CommandResult(EXIT_VIOLATION, report)
        fitted = fits[0]
        spread_l = relative_spread([fit.L for fit in fits])
        spread_c = relative_spread([fit.C for fit in fits], floor=1.0)
        stable = max(spread_l, spread_c) < MAX_SPREAD
        free = group.free_basis_check(generators, config.radius)
        report.update(
            {
                "L": fitted.L,
                "C": fitted.C,
                "samples": fitted.samples,
                "residuals": fitted.residuals,
                "fits": [
                    {
                        "radius": fit.sample_radius,
                        "L": fit.L,
                        "C": fit.C,
                        "samples": fit.samples,
                    }
                    for fit in fits
                ],
                "spread_L": spread_l,
                "spread_C": spread_c,
                "stable": stable,
                "free_basis": free,
                "passed": free and stable and not fits[-1].violations,
            }
        )
        if fits[-1].violations:
            report["witness"] = {
                "fixes_basepoint_copy": fits[-1].violations[0]
            }
            return CommandResult(EXIT_VIOLATION, report)
        if not free:
            report["witness"] = {"reason": "relation among generators"}
            return CommandResult(EXIT_VIOLATION, report)
        if not stable:
            report["witness"] = {"reason": "fit varies across radii"}
            return CommandResult(EXIT_VIOLATION, report)
        return CommandResult(EXIT_PASS, report)
