"""
Helpers shared by the contraction commands.
"""

# Standard library imports
from typing import Tuple

# Local project imports
from core.algebra.graph_of_groups import GraphOfGroups, GroupWord
from core.algebra.word_parser import parse_word
from core.commands.model_context import ModelContext, config_value
from core.commands.protocols import ExperimentConfig
from core.geometry.ps_contraction import SubsetModel


def morse_word(context: ModelContext, config: ExperimentConfig) -> GroupWord:
    """The --word element, or the default Morse word of the first gluing."""
    if config.word:
        return parse_word(config.word)
    return GraphOfGroups(context.complex).default_morse_word()


def morse_subset(
    context: ModelContext, config: ExperimentConfig
) -> SubsetModel:
    """Sampled axis of the configured Morse element."""
    return context.analyzer.subset_from_morse(
        morse_word(context, config), context.basepoint, config.steps
    )


def morse_axis(
    context: ModelContext, config: ExperimentConfig
) -> Tuple[SubsetModel, float]:
    """Axis of the configured Morse element whose ends project C apart."""
    return context.analyzer.morse_axis(
        morse_word(context, config),
        context.basepoint,
        config.steps,
        config.contraction,
        int(str(config_value("morse_max_steps", 64))),
    )
