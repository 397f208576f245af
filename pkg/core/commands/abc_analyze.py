"""
Abc analyze command.

Runs the finite-height decision suite on a monodromy matrix and, with
--gens, classifies the subgroup they generate.
"""

# Standard library imports
from typing import Any, Dict

# Local project imports
from core.algebra.abelian_by_cyclic import (
    AbcElement,
    IntMatrix,
    classify_finite_height_subgroup,
    exists_proper_finite_height,
    fixed_lattice,
    periodic_order,
    periodic_order_cyclotomic,
    sq_classification,
)
from core.commands.protocols import (
    EXIT_PASS,
    EXIT_VIOLATION,
    CommandProtocol,
    CommandResult,
    ExperimentConfig,
)
from core.errors import UsageError


def matrix_from(config: ExperimentConfig) -> IntMatrix:
    """The positional matrix literal of config."""
    if not config.target:
        raise UsageError("a row-major matrix literal is required")
    return IntMatrix.parse(config.target)


class AbcAnalyzeCommand(CommandProtocol):
    """Periodic order, finite-height criterion and classification."""

    name = "abc analyze"

    def __repr__(self) -> str:
        return "AbcAnalyzeCommand()"

    def run(self, config: ExperimentConfig) -> CommandResult:
        phi = matrix_from(config)
        order = periodic_order(phi)
        cross_check = periodic_order_cyclotomic(phi)
        witnesses: Dict[str, Any] = {}
        if order is not None:
            witnesses["fixed_vectors"] = [
                list(v) for v in fixed_lattice(phi, order)
            ]
        report: Dict[str, Any] = {
            "command": self.name,
            "matrix": [list(row) for row in phi.rows],
            "periodic_order": order,
            "periodic_order_cyclotomic": cross_check,
            "exists_finite_height": exists_proper_finite_height(phi),
            "witnesses": witnesses,
        }
        if config.gens:
            gens = [AbcElement.parse(text) for text in config.gens]
            verdict = classify_finite_height_subgroup(phi, gens)
            report["classification"] = {
                "kind": verdict.kind,
                "index": verdict.index,
                "height_bound": verdict.height_bound,
                "generator": (
                    verdict.generator.literal() if verdict.generator else None
                ),
                "lattice_rank": verdict.lattice_rank,
            }
            report["sq_classification"] = sq_classification(phi, gens)
        report["passed"] = order == cross_check
        if order != cross_check:
            report["witness"] = {
                "enumeration": order,
                "cyclotomic": cross_check,
            }
            return CommandResult(EXIT_VIOLATION, report)
        return CommandResult(EXIT_PASS, report)
