"""
Flip manifold spec loader.

Parses the JSON description of a flip manifold (spine graphs, boundary
cycles, gluings) and checks every structural invariant before a model
is built from it.
"""

# Standard library imports
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Sequence, Tuple

# Third-party imports
import networkx as nx

# Local project imports
from core.errors import SpecParseError, SpecValidationError
from core.geometry.spine_tree import SpineTree
from core.geometry.free_group import (
    Letter,
    Word,
    is_cyclically_reduced,
    is_proper_power,
)
from core.logger import logger

SIGNED_LABEL = re.compile(r"^(-)?([A-Za-z_]\w*)(\^(-?1))?$")


@dataclass(frozen=True)
class PieceSpec:
    """One Seifert piece: spine graph x circle."""

    vertices: int
    edges: Tuple[Tuple[int, int, str], ...]
    boundary_cycles: Tuple[Word, ...]
    base_scale: Fraction
    fiber_period: Fraction
    collar_width: Fraction

    def __repr__(self) -> str:
        return (
            f"PieceSpec(vertices={self.vertices}, edges={len(self.edges)}, "
            f"cycles={len(self.boundary_cycles)}, scale={self.base_scale})"
        )

    def cycle_length(self, cycle: int) -> Fraction:
        """Scaled length of one boundary cycle."""
        return self.base_scale * len(self.boundary_cycles[cycle])


@dataclass(frozen=True)
class GluingSpec:
    """Flip gluing of boundary cycle `source` to boundary cycle `target`."""

    source: Tuple[int, int]
    target: Tuple[int, int]
    offsets: Tuple[Fraction, Fraction]

    def __repr__(self) -> str:
        return f"GluingSpec({self.source} -> {self.target}, {self.offsets})"


@dataclass(frozen=True)
class FlipManifoldSpec:
    """Validated finite description of a flip manifold."""

    pieces: Tuple[PieceSpec, ...]
    gluings: Tuple[GluingSpec, ...]

    def __repr__(self) -> str:
        return (
            f"FlipManifoldSpec(pieces={len(self.pieces)}, "
            f"gluings={len(self.gluings)})"
        )

    def gluing_of(self, piece: int, cycle: int) -> Tuple[int, bool]:
        """
        Gluing attached to a boundary cycle.

        Args:
            piece (int): Piece index.
            cycle (int): Boundary cycle index within the piece.

        Returns:
            Tuple[int, bool]: Gluing index and whether the cycle is its
            source end.
        """
        for index, gluing in enumerate(self.gluings):
            if gluing.source == (piece, cycle):
                return index, True
            if gluing.target == (piece, cycle):
                return index, False
        raise SpecValidationError(f"unmatched cycle {(piece, cycle)}")

    def partner(self, piece: int, cycle: int) -> Tuple[int, int]:
        """The (piece, cycle) glued to the given boundary cycle."""
        index, is_source = self.gluing_of(piece, cycle)
        gluing = self.gluings[index]
        return gluing.target if is_source else gluing.source


def parse_rational(value: Any, field: str) -> Fraction:
    """Parse an int, float or 'p/q' string into a Fraction."""
    try:
        if isinstance(value, float):
            return Fraction(value).limit_denominator(10**9)
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise SpecParseError(
            f"{field}: not a rational number: {value!r}"
        ) from e


def parse_signed_label(token: Any) -> Letter:
    """Parse 'a', '-a', 'a^-1' or 'a^1' into a letter."""
    match = SIGNED_LABEL.match(str(token).strip())
    if not match:
        raise SpecParseError(f"bad signed edge label {token!r}")
    negated = bool(match.group(1)) != (match.group(4) == "-1")
    return match.group(2), -1 if negated else 1


def _parse_piece(index: int, raw: Dict[str, Any]) -> PieceSpec:
    try:
        spine = raw["spine"]
        vertices = int(spine["vertices"])
        edges = tuple(
            (int(v), int(w), str(label)) for v, w, label in spine["edges"]
        )
        cycles = tuple(
            tuple(parse_signed_label(token) for token in cycle)
            for cycle in raw["boundary_cycles"]
        )
    except (KeyError, TypeError, ValueError) as e:
        raise SpecParseError(f"piece {index}: malformed entry ({e})") from e
    if not cycles:
        raise SpecValidationError(f"piece {index}: no boundary cycle")
    if "base_scale" in raw:
        scale = parse_rational(raw["base_scale"], f"piece {index} base_scale")
    elif cycles[0]:
        scale = Fraction(1, len(cycles[0]))
    else:
        raise SpecValidationError(f"piece {index}: empty boundary cycle")
    period = parse_rational(
        raw.get("fiber_period", "1"), f"piece {index} fiber_period"
    )
    collar = (
        parse_rational(raw["collar_width"], f"piece {index} collar_width")
        if "collar_width" in raw
        else None
    )
    if scale <= 0 or period <= 0:
        raise SpecValidationError(
            f"piece {index}: base_scale and fiber_period must be positive"
        )
    return PieceSpec(
        vertices=vertices,
        edges=edges,
        boundary_cycles=cycles,
        base_scale=scale,
        fiber_period=period,
        collar_width=collar if collar is not None else Fraction(-1),
    )


def _validate_spine(index: int, piece: PieceSpec) -> None:
    graph = nx.MultiGraph()
    graph.add_nodes_from(range(piece.vertices))
    labels = set()
    for v, w, label in piece.edges:
        if not (0 <= v < piece.vertices and 0 <= w < piece.vertices):
            raise SpecValidationError(
                f"piece {index}: edge {label} leaves the vertex range"
            )
        if label in labels:
            raise SpecValidationError(
                f"piece {index}: duplicate edge label {label}"
            )
        labels.add(label)
        graph.add_edge(v, w, key=label)
    if piece.vertices < 1 or not nx.is_connected(graph):
        raise SpecValidationError(f"piece {index}: spine is not connected")
    betti = graph.number_of_edges() - graph.number_of_nodes() + 1
    if betti < 2:
        raise SpecValidationError(
            f"piece {index}: Betti number < 2 (got {betti})"
        )


def _validate_cycles(index: int, piece: PieceSpec) -> None:
    tree = SpineTree(piece.edges, piece.base_scale)
    for number, cycle in enumerate(piece.boundary_cycles):
        name = f"piece {index} cycle {number}"
        if not cycle:
            raise SpecValidationError(f"{name}: empty boundary cycle")
        if any(label not in tree.edges for label, _ in cycle):
            raise SpecValidationError(f"{name}: unknown edge label")
        start = tree.letter_ends(cycle[0])[0]
        if not tree.is_closed(cycle, start):
            raise SpecValidationError(f"{name}: not a closed edge walk")
        if not is_cyclically_reduced(cycle):
            raise SpecValidationError(f"{name}: not cyclically reduced")
        if is_proper_power(cycle):
            raise SpecValidationError(f"{name}: proper power")


def _validate_gluings(
    pieces: Sequence[PieceSpec], gluings: Sequence[GluingSpec]
) -> None:
    ends: Dict[Tuple[int, int], int] = {}
    for number, gluing in enumerate(gluings):
        for end in (gluing.source, gluing.target):
            piece, cycle = end
            if not (
                0 <= piece < len(pieces)
                and 0 <= cycle < len(pieces[piece].boundary_cycles)
            ):
                raise SpecValidationError(
                    f"gluing {number}: unknown boundary cycle {end}"
                )
            if end in ends:
                raise SpecValidationError(
                    f"gluing {number}: doubly-matched cycle {end} "
                    f"(also in gluing {ends[end]})"
                )
            ends[end] = number
        for near, far in (
            (gluing.source, gluing.target),
            (gluing.target, gluing.source),
        ):
            length = pieces[near[0]].cycle_length(near[1])
            period = pieces[far[0]].fiber_period
            if length != period:
                raise SpecValidationError(
                    f"gluing {number}: flip-compatibility violation, base "
                    f"length {length} of {near} != fiber period {period} "
                    f"of piece {far[0]}"
                )
    for piece_index, piece in enumerate(pieces):
        for cycle in range(len(piece.boundary_cycles)):
            if (piece_index, cycle) not in ends:
                raise SpecValidationError(
                    f"unmatched cycle {(piece_index, cycle)}"
                )


def load_spec(
    text: str, collar_fraction: Fraction = Fraction(1, 2)
) -> FlipManifoldSpec:
    """
    Parse and validate a flip manifold spec.

    Args:
        text (str): JSON document.
        collar_fraction (Fraction): Collar width as a fraction of the
            base scale, used where a piece sets no collar_width.

    Returns:
        FlipManifoldSpec: The validated spec.

    Raises:
        SpecParseError: If the text is not JSON or misses fields.
        SpecValidationError: If an invariant fails.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecParseError(f"invalid JSON: {e}") from e
    if not isinstance(raw, dict) or "pieces" not in raw:
        raise SpecParseError("top level must be an object with 'pieces'")
    pieces: List[PieceSpec] = []
    for index, entry in enumerate(raw["pieces"]):
        piece = _parse_piece(index, entry)
        if piece.collar_width < 0:
            piece = PieceSpec(
                piece.vertices,
                piece.edges,
                piece.boundary_cycles,
                piece.base_scale,
                piece.fiber_period,
                piece.base_scale * collar_fraction,
            )
        if piece.collar_width <= 0:
            raise SpecValidationError(
                f"piece {index}: collar width must be positive"
            )
        _validate_spine(index, piece)
        _validate_cycles(index, piece)
        pieces.append(piece)
    if not pieces:
        raise SpecValidationError("spec has no pieces")
    gluings: List[GluingSpec] = []
    try:
        for number, entry in enumerate(raw.get("gluings", [])):
            source = (int(entry["from"][0]), int(entry["from"][1]))
            target = (int(entry["to"][0]), int(entry["to"][1]))
            offsets = entry.get("offsets", [0, 0])
            gluings.append(
                GluingSpec(
                    source,
                    target,
                    (
                        parse_rational(offsets[0], f"gluing {number} offset"),
                        parse_rational(offsets[1], f"gluing {number} offset"),
                    ),
                )
            )
    except (KeyError, TypeError, ValueError, IndexError) as e:
        raise SpecParseError(f"malformed gluing entry ({e})") from e
    _validate_gluings(pieces, gluings)
    spec = FlipManifoldSpec(tuple(pieces), tuple(gluings))
    logger.debug("Loaded %r", spec)
    return spec


def load_spec_file(
    path: str, collar_fraction: Fraction = Fraction(1, 2)
) -> FlipManifoldSpec:
    """Read a spec file and validate it."""
    with open(path, "r", encoding="utf-8") as spec_file:
        return load_spec(spec_file.read(), collar_fraction)
