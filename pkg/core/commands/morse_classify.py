"""
Morse classify command.

Classifies group words as Morse or not by their translation length on
the dual tree, and checks that the translation length is additive over
powers of Morse words.
"""

# Standard library imports
from typing import Any, Dict, List, Optional, Tuple

# Third-party imports
import numpy as np

# Local project imports
from core.algebra.graph_of_groups import GraphOfGroups, GroupWord
from core.algebra.word_parser import format_group_word, parse_word
from core.commands.model_context import build_context
from core.commands.protocols import (
    EXIT_PASS,
    EXIT_VIOLATION,
    CommandProtocol,
    CommandResult,
    ExperimentConfig,
)
from core.sampling import parallel_map, spawn_generators

MAX_POWER = 5
MAX_SYLLABLES = 6


def classify_word(
    group: GraphOfGroups, word: GroupWord
) -> Tuple[Dict[str, Any], Optional[Dict[str, Any]]]:
    """Row for one word and a witness if powers break additivity."""
    reduced = group.britton_reduce(word).reduced
    row: Dict[str, Any] = {
        "word": format_group_word(word),
        "normal_form": format_group_word(reduced),
    }
    if reduced.is_identity:
        row.update({"identity": True, "morse": False, "translation_length": 0})
        return row, None
    cyclic = group.cyclic_reduce(word)
    length = cyclic.stable_count
    row.update(
        {
            "identity": False,
            "morse": length > 0,
            "translation_length": length,
            "cyclic_form": format_group_word(cyclic.reduced),
        }
    )
    if length == 0:
        return row, None
    for n in range(2, MAX_POWER + 1):
        powered = group.translation_length(word.power(n))
        if powered != n * length:
            return row, {
                "word": row["word"],
                "power": n,
                "expected": n * length,
                "found": powered,
            }
    return row, None


class MorseClassifyCommand(CommandProtocol):
    """Classify --word, or random words closed at piece 0."""

    name = "morse classify"

    def __repr__(self) -> str:
        return "MorseClassifyCommand()"

    def run(self, config: ExperimentConfig) -> CommandResult:
        context = build_context(config)
        group = GraphOfGroups(context.complex)
        if config.word:
            words: List[GroupWord] = [parse_word(config.word)]
        else:

            def draw(rng: np.random.Generator) -> GroupWord:
                size = int(rng.integers(1, MAX_SYLLABLES + 1))
                return group.random_word(rng, size)

            words = parallel_map(
                draw, spawn_generators(config.seed, config.samples)
            )
        results = parallel_map(lambda w: classify_word(group, w), words)
        rows = []
        for index, (row, _) in enumerate(results):
            row["sample"] = index
            rows.append(row)
        witnesses = [w for _, w in results if w is not None]
        report: Dict[str, Any] = {
            "command": self.name,
            "seed": config.seed,
            "samples": len(rows),
            "morse": sum(1 for row in rows if row["morse"]),
            "passed": not witnesses,
            "rows": rows,
        }
        if witnesses:
            report["witness"] = witnesses[0]
            return CommandResult(EXIT_VIOLATION, report)
        return CommandResult(EXIT_PASS, report)
