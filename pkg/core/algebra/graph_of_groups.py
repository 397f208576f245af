"""
Graph-of-groups words.

Vertex groups are (free group of the spine) x (fiber Z), edge groups are
(boundary cycle) x (fiber) and each gluing contributes a stable letter
whose conjugation swaps the boundary and fiber generators. Words are
reduced in Britton normal form; the number of stable letters left after
cyclic reduction is the translation length on the dual tree.
"""

# Standard library imports
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

# Third-party imports
import numpy as np

# Local project imports
from core.errors import (
    IdentityWordError,
    MalformedWordError,
    NotMorseError,
)
from core.geometry.flip_complex import FlipComplex, PointCoord
from core.geometry.free_group import (
    Word,
    concat,
    format_word,
    invert,
    power,
    power_exponent,
    reduce_word,
)
from core.logger import logger
from core.sampling import choose, parallel_map


@dataclass(frozen=True)
class VertexElement:
    """Element (free, fiber) of the vertex group of a piece."""

    piece: int
    free: Word = ()
    fiber: int = 0

    def __repr__(self) -> str:
        return (
            f"VertexElement({self.piece}, {format_word(self.free)!r}, "
            f"{self.fiber})"
        )

    @property
    def is_trivial(self) -> bool:
        """True for the identity of the vertex group."""
        return not self.free and self.fiber == 0

    def inverse(self) -> "VertexElement":
        """Inverse inside the vertex group (the product is direct)."""
        return VertexElement(self.piece, invert(self.free), -self.fiber)


@dataclass(frozen=True)
class StableLetter:
    """Stable letter of a gluing, sign +1 or -1."""

    gluing: int
    sign: int = 1

    def __repr__(self) -> str:
        return f"StableLetter({self.gluing}, {self.sign:+d})"

    def inverse(self) -> "StableLetter":
        """The same letter with the opposite sign."""
        return StableLetter(self.gluing, -self.sign)


Syllable = Union[VertexElement, StableLetter]


@dataclass(frozen=True)
class GroupWord:
    """Syllable sequence read left to right."""

    syllables: Tuple[Syllable, ...] = ()

    def __repr__(self) -> str:
        return f"GroupWord({list(self.syllables)!r})"

    def __len__(self) -> int:
        return len(self.syllables)

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(self.syllables + other.syllables)

    def inverse(self) -> "GroupWord":
        """Formal inverse: reversed syllables, each inverted."""
        return GroupWord(
            tuple(syllable.inverse() for syllable in reversed(self.syllables))
        )

    def power(self, exponent: int) -> "GroupWord":
        """Formal power; negative exponents use the inverse."""
        base = self if exponent >= 0 else self.inverse()
        return GroupWord(base.syllables * abs(exponent))

    @property
    def stable_count(self) -> int:
        """Number of stable letters."""
        return sum(
            isinstance(syllable, StableLetter) for syllable in self.syllables
        )

    @property
    def is_identity(self) -> bool:
        """True if there are no syllables left."""
        return not self.syllables


@dataclass(frozen=True)
class NormalForm:
    """
    Britton-reduced word with its stable count.

    For cyclic reductions `conjugator` holds g with
    reduced = g * original * g^-1; it is empty otherwise.
    """

    reduced: GroupWord
    stable_count: int
    conjugator: GroupWord = GroupWord()


@dataclass
class QIReport:
    """Fitted two-sided bound d_H / L - C <= d_T <= L d_H + C."""

    L: float
    C: float
    sample_radius: int
    samples: int
    residuals: Dict[str, float] = field(default_factory=dict)
    violations: List[str] = field(default_factory=list)

    def __repr__(self) -> str:
        return (
            f"QIReport(L={self.L:.4f}, C={self.C:.4f}, "
            f"radius={self.sample_radius}, samples={self.samples})"
        )


class GraphOfGroups:
    """
    Fundamental group of a flip manifold as a graph of groups.

    Attributes:
        complex (FlipComplex): Model the group acts on.
    """

    def __init__(self, complex_: FlipComplex) -> None:
        """Bind to a model; boundary elements come from the model."""
        self.complex = complex_
        self.spec = complex_.spec

    def __repr__(self) -> str:
        return f"GraphOfGroups({self.spec!r})"

    def ends(self, letter: StableLetter) -> Tuple[int, int]:
        """Pieces on the left and on the right of a stable letter."""
        gluing = self.spec.gluings[letter.gluing]
        if letter.sign > 0:
            return gluing.source[0], gluing.target[0]
        return gluing.target[0], gluing.source[0]

    def check(self, word: GroupWord) -> Tuple[int, int]:
        """
        Validate piece bookkeeping of a word.

        Returns:
            Tuple[int, int]: Start and end piece of the word.

        Raises:
            MalformedWordError: On unknown pieces or gluings, signs other
            than +-1, or syllables whose pieces do not line up.
        """
        current: Optional[int] = None
        start: Optional[int] = None
        trees = self.complex.trees
        for syllable in word.syllables:
            if isinstance(syllable, VertexElement):
                if not 0 <= syllable.piece < len(self.spec.pieces):
                    raise MalformedWordError(f"unknown piece in {syllable!r}")
                if not trees[syllable.piece].is_closed(syllable.free):
                    raise MalformedWordError(f"{syllable!r} is not a loop")
                left, right = syllable.piece, syllable.piece
            elif isinstance(syllable, StableLetter):
                if not 0 <= syllable.gluing < len(self.spec.gluings):
                    raise MalformedWordError(f"unknown gluing {syllable!r}")
                if syllable.sign not in (1, -1):
                    raise MalformedWordError(f"bad sign in {syllable!r}")
                left, right = self.ends(syllable)
            else:
                raise MalformedWordError(f"not a syllable: {syllable!r}")
            if current is not None and left != current:
                raise MalformedWordError(
                    f"{syllable!r} starts in piece {left}, "
                    f"previous syllable ends in piece {current}"
                )
            if start is None:
                start = left
            current = right
        if start is None or current is None:
            return 0, 0
        return start, current

    def edge_exponent(
        self, element: VertexElement, cycle: int
    ) -> Optional[int]:
        """Power of the boundary element equal to the free part, if any."""
        tail = self.complex.tails[element.piece][cycle]
        root = self.spec.pieces[element.piece].boundary_cycles[cycle]
        return power_exponent(concat(invert(tail), element.free, tail), root)

    def boundary(self, piece: int, cycle: int, exponent: int) -> Word:
        """The boundary element of a cycle raised to a power."""
        return power(self.complex.boundary_elements[piece][cycle], exponent)

    def _pinch(
        self, outer: StableLetter, middle: VertexElement
    ) -> Optional[VertexElement]:
        gluing = self.spec.gluings[outer.gluing]
        # t u t^-1 needs u on the target side, t^-1 u t on the source side
        inner, outside = (
            (gluing.target, gluing.source)
            if outer.sign > 0
            else (gluing.source, gluing.target)
        )
        if middle.piece != inner[0]:
            return None
        exponent = self.edge_exponent(middle, inner[1])
        if exponent is None:
            return None
        return VertexElement(
            outside[0],
            self.boundary(outside[0], outside[1], middle.fiber),
            exponent,
        )

    def _push(self, stack: List[Syllable], syllable: Syllable) -> None:
        if isinstance(syllable, VertexElement):
            element = VertexElement(
                syllable.piece, reduce_word(syllable.free), syllable.fiber
            )
            if stack and isinstance(stack[-1], VertexElement):
                top = stack.pop()
                element = VertexElement(
                    top.piece,
                    concat(top.free, element.free),
                    top.fiber + element.fiber,
                )
            if not element.is_trivial:
                stack.append(element)
            return
        if stack and stack[-1] == syllable.inverse():
            stack.pop()
            return
        if (
            len(stack) >= 2
            and isinstance(stack[-1], VertexElement)
            and stack[-2] == syllable.inverse()
        ):
            replacement = self._pinch(
                stack[-2], stack[-1]  # type: ignore[arg-type]
            )
            if replacement is not None:
                del stack[-2:]
                self._push(stack, replacement)
                return
        stack.append(syllable)

    def britton_reduce(self, word: GroupWord) -> NormalForm:
        """
        Britton normal form.

        Args:
            word (GroupWord): Any well-formed word.

        Returns:
            NormalForm: Reduced word and its stable count.

        Raises:
            MalformedWordError: If the syllables do not line up.
        """
        self.check(word)
        stack: List[Syllable] = []
        for syllable in word.syllables:
            self._push(stack, syllable)
        reduced = GroupWord(tuple(stack))
        return NormalForm(reduced, reduced.stable_count)

    def multiply(self, *words: GroupWord) -> GroupWord:
        """Reduced product of words."""
        product = GroupWord()
        for word in words:
            product = product * word
        return self.britton_reduce(product).reduced

    def cyclic_reduce(self, word: GroupWord) -> NormalForm:
        """
        Britton-reduce and strip conjugating prefixes.

        Returns:
            NormalForm: A cyclically reduced conjugate and the conjugator.
        """
        start, end = self.check(word)
        if start != end:
            raise MalformedWordError(
                f"word is not closed: starts in piece {start}, ends in {end}"
            )
        current = self.britton_reduce(word).reduced
        conjugator = GroupWord()
        while current.stable_count:
            first = current.syllables[0]
            if isinstance(first, VertexElement):
                g = GroupWord((first.inverse(),))
            else:
                last = current.syllables[-1]
                u = (
                    last
                    if isinstance(last, VertexElement)
                    else VertexElement(self.ends(first)[0])
                )
                index = -2 if isinstance(last, VertexElement) else -1
                closing = current.syllables[index]
                if not (
                    isinstance(closing, StableLetter)
                    and closing == first.inverse()
                    and self._pinch(closing, u) is not None
                ):
                    break
                g = GroupWord(current.syllables[index:])
            current = self.multiply(g, current, g.inverse())
            conjugator = self.multiply(g, conjugator)
        return NormalForm(current, current.stable_count, conjugator)

    def translation_length(self, word: GroupWord) -> int:
        """Translation length of a closed word on the dual tree."""
        return self.cyclic_reduce(word).stable_count

    def is_morse(self, word: GroupWord) -> bool:
        """
        True iff the element is not conjugate into a vertex group.

        Raises:
            IdentityWordError: For the identity.
        """
        if self.britton_reduce(word).reduced.is_identity:
            raise IdentityWordError("the identity has no Morse type")
        return self.translation_length(word) > 0

    def act_on_point(self, word: GroupWord, x: PointCoord) -> PointCoord:
        """
        Deck transformation by a word closed at piece 0.

        Syllables act right to left; vertex elements move points inside
        the current chart and stable letters re-root the chart.
        """
        start, end = self.check(word)
        if start != 0 or end != 0:
            raise MalformedWordError("deck action needs a word based at 0")
        address, base, fiber = x.copy.address, x.base, x.fiber
        for syllable in reversed(word.syllables):
            if isinstance(syllable, VertexElement):
                address, base, fiber = self.complex.transport_vertex(
                    syllable.piece,
                    syllable.free,
                    syllable.fiber,
                    address,
                    base,
                    fiber,
                )
            else:
                address = self.complex.transport_stable(
                    syllable.gluing, syllable.sign, address
                )
        return PointCoord(self.complex.copy_at(address), base, fiber)

    def default_morse_word(self, gluing: int = 0) -> GroupWord:
        """
        A Morse word u t v t^-1 through one gluing.

        u and v are the shortest spine loops outside the edge groups met
        on either side of t, so no pinch can occur.
        """
        spec = self.spec.gluings[gluing]
        (source_piece, source_cycle), (target_piece, target_cycle) = (
            spec.source,
            spec.target,
        )
        if source_piece != 0:
            raise MalformedWordError(f"gluing {gluing} does not leave piece 0")
        outer = self._loop_outside(source_piece, source_cycle)
        inner = self._loop_outside(target_piece, target_cycle)
        return GroupWord(
            (
                VertexElement(source_piece, outer),
                StableLetter(gluing, 1),
                VertexElement(target_piece, inner),
                StableLetter(gluing, -1),
            )
        )

    def _loop_outside(self, piece: int, cycle: int) -> Word:
        tree = self.complex.trees[piece]
        radius = 1
        while True:
            for loop in tree.closed_words(radius):
                if loop and self.edge_exponent(
                    VertexElement(piece, loop), cycle
                ) is None:
                    return loop
            radius += 1

    def random_word(
        self, rng: np.random.Generator, syllables: int, fiber_range: int = 2
    ) -> GroupWord:
        """
        Random word closed at piece 0.

        Vertex elements are short spine loops with small fiber powers;
        stable letters are drawn among those leaving the current piece.
        """
        parts: List[Syllable] = []
        piece = 0
        for index in range(syllables):
            letters = [
                StableLetter(number, sign)
                for number in range(len(self.spec.gluings))
                for sign in (1, -1)
                if self.ends(StableLetter(number, sign))[0] == piece
            ]
            if index % 2 == 0 or not letters:
                loops = self.complex.trees[piece].closed_words(2)
                parts.append(
                    VertexElement(
                        piece,
                        choose(rng, loops),
                        int(rng.integers(-fiber_range, fiber_range + 1)),
                    )
                )
                continue
            letter = choose(rng, letters)
            parts.append(letter)
            piece = self.ends(letter)[1]
        return self._close(GroupWord(tuple(parts)), piece)

    def _close(self, word: GroupWord, piece: int) -> GroupWord:
        # walk back to piece 0 along the last stable letters used
        closing: List[Syllable] = []
        for syllable in reversed(word.syllables):
            if piece == 0:
                break
            if isinstance(syllable, StableLetter):
                closing.append(syllable.inverse())
                piece = self.ends(syllable)[0]
        return GroupWord(word.syllables + tuple(closing))

    # ------------------------------------------------------------------
    # Subgroups generated by Morse elements
    # ------------------------------------------------------------------

    def _ball_letters(
        self, generators: Sequence[GroupWord]
    ) -> List[Tuple[int, int, GroupWord]]:
        letters = []
        for index, generator in enumerate(generators):
            letters.append((index, 1, generator))
            letters.append((index, -1, generator.inverse()))
        return letters

    def free_basis_check(
        self, generators: Sequence[GroupWord], radius: int
    ) -> bool:
        """
        True if no nonempty reduced generator word up to radius is trivial.
        """
        letters = self._ball_letters(generators)
        frontier: List[Tuple[Optional[Tuple[int, int]], GroupWord]] = [
            (None, GroupWord())
        ]
        for length in range(1, radius + 1):
            next_frontier = []
            for first, element in frontier:
                for index, sign, letter in letters:
                    if first is not None and first == (index, -sign):
                        continue
                    product = self.multiply(letter, element)
                    if product.is_identity:
                        logger.info(
                            "Relation of length %d among generators", length
                        )
                        return False
                    next_frontier.append(((index, sign), product))
            frontier = next_frontier
        return True

    def orbit_qi_test(
        self,
        generators: Sequence[GroupWord],
        radius: int,
        basepoint: PointCoord,
    ) -> QIReport:
        """
        Fit the orbit map of a subgroup into the dual tree.

        Args:
            generators (Sequence[GroupWord]): Subgroup generators.
            radius (int): Word-length radius of the sampled ball.
            basepoint (PointCoord): Orbit basepoint, off the walls.

        Returns:
            QIReport: Least L + C(L) over an L grid, with violations for
            nontrivial elements that fix the basepoint's copy.

        Raises:
            NotMorseError: If a generator is conjugate into a vertex group.
        """
        return self.orbit_qi_fits(generators, [radius], basepoint)[0]

    def orbit_qi_fits(
        self,
        generators: Sequence[GroupWord],
        radii: Sequence[int],
        basepoint: PointCoord,
    ) -> List[QIReport]:
        """
        Fit the orbit map on the balls of several radii.

        The ball of the largest radius is enumerated once; each fit uses
        the elements of word length at most its radius.

        Raises:
            NotMorseError: If a generator is conjugate into a vertex group.
        """
        for generator in generators:
            if generator.is_identity or not self.is_morse(generator):
                raise NotMorseError(
                    "generator fixes a vertex of the dual tree",
                    witness=generator,
                )
        letters = self._ball_letters(generators)
        origin = basepoint.copy
        lengths, distances = [0], [0]
        violations: List[Tuple[int, str]] = []
        frontier: List[
            Tuple[Optional[Tuple[int, int]], GroupWord, PointCoord]
        ] = [(None, GroupWord(), basepoint)]
        for length in range(1, max(radii) + 1):
            jobs = [
                (index, sign, letter, element, point)
                for first, element, point in frontier
                for index, sign, letter in letters
                if first is None or first != (index, -sign)
            ]

            def advance(
                job: Tuple[int, int, GroupWord, GroupWord, PointCoord]
            ) -> Tuple[Optional[Tuple[int, int]], GroupWord, PointCoord]:
                index, sign, letter, element, point = job
                return (
                    (index, sign),
                    self.multiply(letter, element),
                    self.act_on_point(letter, point),
                )

            frontier = parallel_map(advance, jobs)
            for _, element, point in frontier:
                gap = self.complex.dual_distance(origin, point.copy)
                if gap == 0 and not element.is_identity:
                    violations.append((length, repr(element)))
                lengths.append(length)
                distances.append(gap)
        if violations:
            logger.warning(
                "%d ball elements fix the basepoint copy", len(violations)
            )
        return [
            self._fit_ball(
                lengths,
                distances,
                radius,
                [text for length, text in violations if length <= radius],
            )
            for radius in radii
        ]

    @staticmethod
    def _fit_ball(
        lengths: Sequence[int],
        distances: Sequence[int],
        radius: int,
        violations: List[str],
    ) -> QIReport:
        kept = [(a, b) for a, b in zip(lengths, distances) if a <= radius]
        sizes = [a for a, _ in kept]
        gaps = [b for _, b in kept]
        fitted_l, fitted_c = fit_two_sided(sizes, gaps)
        n = np.asarray(sizes, dtype=float)
        d = np.asarray(gaps, dtype=float)
        nonzero = n > 0
        residuals = {
            "min_upper_slack": float(np.min(fitted_l * n + fitted_c - d)),
            "min_lower_slack": float(np.min(d - n / fitted_l + fitted_c)),
            "mean_ratio": (
                float(np.mean(d[nonzero] / n[nonzero]))
                if nonzero.any()
                else 0.0
            ),
        }
        return QIReport(
            fitted_l, fitted_c, radius, int(n.size), residuals, violations
        )


def fit_two_sided(
    lengths: Sequence[int], distances: Sequence[int], grid: int = 400
) -> Tuple[float, float]:
    """
    Least L + C(L) over an L grid, C(L) the smallest additive slack.

    Args:
        lengths (Sequence[int]): Word lengths d_H.
        distances (Sequence[int]): Dual-tree distances d_T.
        grid (int): Number of L values tried.

    Returns:
        Tuple[float, float]: (L, C) with L >= 1 and C >= 0.
    """
    n = np.asarray(lengths, dtype=float)
    d = np.asarray(distances, dtype=float)
    if not np.any(n > 0):
        return 1.0, 0.0
    ratios = [1.0]
    ratios.extend((n[d > 0] / d[d > 0]).tolist())
    ratios.extend((d[n > 0] / n[n > 0]).tolist())
    candidates = np.linspace(1.0, max(ratios) + 1.0, grid)
    slack = np.maximum(
        n[None, :] / candidates[:, None] - d[None, :],
        d[None, :] - candidates[:, None] * n[None, :],
    )
    c_values = np.maximum(slack.max(axis=1), 0.0)
    best = int(np.argmin(candidates + c_values))
    return float(candidates[best]), float(c_values[best])
