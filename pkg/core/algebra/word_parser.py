"""
Word literals.

    word      := syllable (";" syllable)*
    syllable  := vertex | stable
    vertex    := "v" INT ":" freeword ["|" "f" INT]
    freeword  := (LABEL ["^" INT])*
    stable    := "t" INT ["^-1" | "^1"]

Example: "v0: a b a^-1 | f 2 ; t0 ; v1: b | f -1 ; t0^-1".
An empty literal is the identity.
"""

# Standard library imports
import re
from typing import List

# Local project imports
from core.algebra.graph_of_groups import (
    GroupWord,
    StableLetter,
    Syllable,
    VertexElement,
)
from core.errors import MalformedWordError
from core.geometry.free_group import Letter, format_word, reduce_word

VERTEX = re.compile(r"^v\s*(\d+)\s*:(.*?)(?:\|\s*f\s*([+-]?\d+))?$")
STABLE = re.compile(r"^t\s*(\d+)\s*(?:\^\s*([+-]?1))?$")
POWER = re.compile(r"^([A-Za-z_]\w*)(?:\^([+-]?\d+))?$")


def _parse_free(text: str, literal: str) -> List[Letter]:
    letters: List[Letter] = []
    for token in text.split():
        match = POWER.match(token)
        if not match:
            raise MalformedWordError(
                f"bad free letter {token!r} in {literal!r}"
            )
        exponent = int(match.group(2)) if match.group(2) else 1
        sign = 1 if exponent > 0 else -1
        letters.extend([(match.group(1), sign)] * abs(exponent))
    return letters


def parse_word(literal: str) -> GroupWord:
    """
    Parse a word literal.

    Args:
        literal (str): Semicolon-separated syllables.

    Returns:
        GroupWord: The syllables as written (not reduced).

    Raises:
        MalformedWordError: If a syllable matches neither form.
    """
    syllables: List[Syllable] = []
    if not literal.strip():
        return GroupWord()
    for chunk in literal.split(";"):
        part = chunk.strip()
        vertex = VERTEX.match(part)
        if vertex:
            syllables.append(
                VertexElement(
                    int(vertex.group(1)),
                    reduce_word(_parse_free(vertex.group(2), literal)),
                    int(vertex.group(3)) if vertex.group(3) else 0,
                )
            )
            continue
        stable = STABLE.match(part)
        if stable:
            sign = int(stable.group(2)) if stable.group(2) else 1
            syllables.append(StableLetter(int(stable.group(1)), sign))
            continue
        raise MalformedWordError(f"bad syllable {part!r} in {literal!r}")
    return GroupWord(tuple(syllables))


def format_group_word(word: GroupWord) -> str:
    """Render a word in the literal syntax parse_word reads."""
    parts = []
    for syllable in word.syllables:
        if isinstance(syllable, StableLetter):
            suffix = "^-1" if syllable.sign < 0 else ""
            parts.append(f"t{syllable.gluing}{suffix}")
            continue
        text = f"v{syllable.piece}: {format_word(syllable.free)}".rstrip()
        if syllable.fiber:
            text += f" | f {syllable.fiber}"
        parts.append(text)
    return " ; ".join(parts)
