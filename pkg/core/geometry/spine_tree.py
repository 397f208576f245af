"""
Universal cover of a spine graph.

Vertices of the cover are reduced edge paths starting at spine vertex 0.
Every edge has length `scale`; the metric is exact when the scale and
offsets are Fractions. Boundary axes and pairs of axes are handled here
so that projections and bridges are closed-form tree computations.
"""

# Standard library imports
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

# Third-party imports
import numpy as np

# Local project imports
from core.errors import InternalConsistencyError
from core.geometry.free_group import (
    Letter,
    Word,
    common_prefix_length,
    concat,
    invert,
    inverse_letter,
)

Real = Union[int, float, Fraction]


@dataclass(frozen=True)
class TreePoint:
    """
    Position in the spine tree.

    A vertex has no step. An interior edge point stores the endpoint
    closer to the base vertex, the letter leading to the other endpoint
    and the distance 0 < offset < scale from the stored vertex.
    """

    vertex: Word
    step: Optional[Letter] = None
    offset: Real = 0

    def __repr__(self) -> str:
        if self.step is None:
            return f"TreePoint({self.vertex!r})"
        return f"TreePoint({self.vertex!r}, {self.step!r}, {self.offset!r})"


@dataclass(frozen=True)
class LinePair:
    """
    Relative position of two axes, in their own arclength coordinates.

    On the first axis the shared stretch (or the bridge foot, when the
    axes are disjoint) is [a_low, a_high]; `b_low` is the arclength on
    the second axis of the point at a_low, and `orientation` is +1 when
    both arclengths increase together along the shared stretch.
    """

    a_low: Real
    a_high: Real
    b_low: Real
    orientation: int
    gap: Real

    def phi(self, s: Real) -> Real:
        """Map arclength on the first axis to the second, along the overlap."""
        return self.b_low + self.orientation * (s - self.a_low)

    def b_bounds(self) -> Tuple[Real, Real]:
        """Return the shared stretch in second-axis arclength."""
        end = self.phi(self.a_high)
        return min(self.b_low, end), max(self.b_low, end)

    def reversed(self) -> "LinePair":
        """Return the same pair seen from the second axis."""
        length = self.a_high - self.a_low
        if self.orientation > 0:
            return LinePair(
                self.b_low, self.b_low + length, self.a_low, 1, self.gap
            )
        return LinePair(
            self.b_low - length, self.b_low, self.a_high, -1, self.gap
        )

    def tree_distance(self, s: Real, t: Real) -> Real:
        """Tree distance between arclength s on axis one and t on axis two."""
        a = min(max(s, self.a_low), self.a_high)
        b_min, b_max = self.b_bounds()
        b = min(max(t, b_min), b_max)
        return abs(s - a) + abs(t - b) + self.gap + abs(self.phi(a) - b)

    def tree_distance_grid(
        self, s: np.ndarray, t: np.ndarray
    ) -> np.ndarray:
        """Vectorised tree_distance over broadcastable float arrays."""
        a_low, a_high = float(self.a_low), float(self.a_high)
        b_min, b_max = (float(v) for v in self.b_bounds())
        a = np.clip(s, a_low, a_high)
        b = np.clip(t, b_min, b_max)
        phi = float(self.b_low) + self.orientation * (a - a_low)
        return (
            np.abs(s - a) + np.abs(t - b) + float(self.gap) + np.abs(phi - b)
        )

    def bridge(self) -> Tuple[Real, Real]:
        """Arclengths of the canonical closest pair (overlap midpoint)."""
        middle = (self.a_low + self.a_high) / 2
        return middle, self.phi(middle)


class SpineTree:
    """
    Universal cover of one finite spine graph with edge length `scale`.

    Attributes:
        edges (Dict[str, Tuple[int, int]]): Endpoints of every label.
        order (Dict[str, int]): Label order used for canonical words.
        scale (Fraction): Length of every edge.
    """

    def __init__(
        self, edges: Sequence[Tuple[int, int, str]], scale: Fraction
    ) -> None:
        """Index the spine edges and prepare the lazy caches."""
        self.edges: Dict[str, Tuple[int, int]] = {
            label: (v, w) for v, w, label in edges
        }
        self.order: Dict[str, int] = {
            label: index for index, (_, _, label) in enumerate(edges)
        }
        self.scale = scale
        self._closed: Dict[int, List[Word]] = {}
        self._cache_lock = threading.Lock()

    def __repr__(self) -> str:
        return f"SpineTree(edges={len(self.edges)}, scale={self.scale})"

    def leaving(self, vertex: int) -> List[Letter]:
        """Letters whose edge starts at the given spine vertex."""
        letters: List[Letter] = []
        for label, (v, w) in self.edges.items():
            if v == vertex:
                letters.append((label, 1))
            if w == vertex:
                letters.append((label, -1))
        return letters

    def letter_ends(self, letter: Letter) -> Tuple[int, int]:
        """Spine vertices (start, end) of a letter."""
        v, w = self.edges[letter[0]]
        return (v, w) if letter[1] > 0 else (w, v)

    def end_vertex(self, word: Word) -> int:
        """Spine vertex where a path from vertex 0 ends."""
        return self.letter_ends(word[-1])[1] if word else 0

    def is_path(self, word: Word, start: int = 0) -> bool:
        """True if consecutive letters share endpoints, starting at start."""
        current = start
        for letter in word:
            if letter[0] not in self.edges:
                return False
            first, last = self.letter_ends(letter)
            if first != current:
                return False
            current = last
        return True

    def is_closed(self, word: Word, start: int = 0) -> bool:
        """True if the word is a loop at start."""
        if not self.is_path(word, start):
            return False
        return not word or self.letter_ends(word[-1])[1] == start

    def children(self, vertex: Word) -> List[Letter]:
        """Letters leading one edge further from the base vertex."""
        back = inverse_letter(vertex[-1]) if vertex else None
        return [
            letter
            for letter in self.leaving(self.end_vertex(vertex))
            if letter != back
        ]

    def closed_words(self, radius: int) -> List[Word]:
        """All reduced loops at vertex 0 of length at most radius."""
        with self._cache_lock:
            if radius in self._closed:
                return self._closed[radius]
        found: List[Word] = []
        frontier: List[Word] = [()]
        for _ in range(radius + 1):
            next_frontier: List[Word] = []
            for word in frontier:
                if self.end_vertex(word) == 0:
                    found.append(word)
                next_frontier.extend(
                    word + (letter,) for letter in self.children(word)
                )
            frontier = next_frontier
        with self._cache_lock:
            self._closed.setdefault(radius, found)
        return found

    def vertex_distance(self, u: Word, v: Word) -> Real:
        """Distance between two cover vertices."""
        common = common_prefix_length(u, v)
        return self.scale * (len(u) + len(v) - 2 * common)

    def normalize(self, vertex: Word, step: Letter, offset: Real) -> TreePoint:
        """
        Canonical TreePoint at distance offset from vertex along step.

        Args:
            vertex (Word): One endpoint of the edge.
            step (Letter): Letter from vertex to the other endpoint.
            offset (Real): Distance from vertex, within [0, scale].

        Returns:
            TreePoint: The point with its parent-side representation.
        """
        child = concat(vertex, (step,))
        if len(child) < len(vertex):
            return self.normalize(
                child, inverse_letter(step), self.scale - offset
            )
        if offset <= 0:
            return TreePoint(vertex)
        if offset >= self.scale:
            return TreePoint(child)
        return TreePoint(vertex, step, offset)

    def endpoints(self, point: TreePoint) -> List[Tuple[Word, Real]]:
        """Edge endpoints of a point with the distance to each."""
        if point.step is None:
            return [(point.vertex, 0)]
        child = point.vertex + (point.step,)
        return [
            (point.vertex, point.offset),
            (child, self.scale - point.offset),
        ]

    def _same_edge(self, p: TreePoint, q: TreePoint) -> bool:
        return (
            p.step is not None
            and q.step is not None
            and (p.vertex, p.step) == (q.vertex, q.step)
        )

    def point_distance(self, p: TreePoint, q: TreePoint) -> Real:
        """Exact tree distance between two points."""
        if p == q:
            return 0
        if self._same_edge(p, q):
            return abs(p.offset - q.offset)
        return min(
            cost_p + self.vertex_distance(u, v) + cost_q
            for u, cost_p in self.endpoints(p)
            for v, cost_q in self.endpoints(q)
        )

    def act(self, element: Word, point: TreePoint) -> TreePoint:
        """Left translation by a loop at vertex 0."""
        vertex = concat(element, point.vertex)
        if point.step is None:
            return TreePoint(vertex)
        return self.normalize(vertex, point.step, point.offset)

    @staticmethod
    def vertex_path(u: Word, v: Word) -> List[Word]:
        """Vertices of the tree geodesic from u to v."""
        common = common_prefix_length(u, v)
        up = [u[:i] for i in range(len(u), common - 1, -1)]
        down = [v[:i] for i in range(common + 1, len(v) + 1)]
        return up + down

    def _waypoints(self, p: TreePoint, q: TreePoint) -> List[TreePoint]:
        if p == q:
            return [p]
        if self._same_edge(p, q):
            return [p, q]
        _, u, v = min(
            (cost_p + self.vertex_distance(u, v) + cost_q, u, v)
            for u, cost_p in self.endpoints(p)
            for v, cost_q in self.endpoints(q)
        )
        points = [TreePoint(w) for w in self.vertex_path(u, v)]
        if p.step is not None:
            points.insert(0, p)
        if q.step is not None:
            points.append(q)
        return points

    def _edge_offset(
        self, point: TreePoint, parent: Word, step: Letter
    ) -> Real:
        if point.step is not None:
            return point.offset
        return 0 if point.vertex == parent else self.scale

    def _interpolate(
        self, first: TreePoint, second: TreePoint, along: Real
    ) -> TreePoint:
        if first.step is not None:
            parent, step = first.vertex, first.step
        elif second.step is not None:
            parent, step = second.vertex, second.step
        elif len(second.vertex) > len(first.vertex):
            parent, step = first.vertex, second.vertex[-1]
        else:
            parent, step = second.vertex, first.vertex[-1]
        start = self._edge_offset(first, parent, step)
        end = self._edge_offset(second, parent, step)
        offset = start + along if end >= start else start - along
        return self.normalize(parent, step, offset)

    def point_along(self, p: TreePoint, q: TreePoint, dist: Real) -> TreePoint:
        """
        Point at distance dist from p on the geodesic to q.

        Args:
            p (TreePoint): Start of the geodesic.
            q (TreePoint): End of the geodesic.
            dist (Real): Arclength from p, clamped to the geodesic.

        Returns:
            TreePoint: The interpolated point.
        """
        waypoints = self._waypoints(p, q)
        travelled: Real = 0
        for first, second in zip(waypoints, waypoints[1:]):
            length = self.point_distance(first, second)
            if dist <= travelled + length:
                return self._interpolate(first, second, dist - travelled)
            travelled += length
        return q


class Axis:
    """
    Elevation of a boundary cycle: the bi-infinite path origin * cycle^n.

    Arclength zero sits at the origin vertex and increases in the
    direction of the cycle.
    """

    def __init__(self, tree: SpineTree, origin: Word, cycle: Word) -> None:
        """Store the tree, the origin vertex and the traversed cycle."""
        self.tree = tree
        self.origin = origin
        self.cycle = cycle
        self._backward = invert(cycle)

    def __repr__(self) -> str:
        return f"Axis(origin={self.origin!r}, cycle={self.cycle!r})"

    @property
    def period(self) -> Real:
        """Arclength of one traversal of the cycle."""
        return self.tree.scale * len(self.cycle)

    def vertex_at(self, n: int) -> Word:
        """Cover vertex n edges from the origin along the axis."""
        source = self.cycle if n >= 0 else self._backward
        repeats = abs(n) // len(source) + 1
        return concat(self.origin, (source * repeats)[: abs(n)])

    def step_at(self, n: int) -> Letter:
        """Letter leading from vertex_at(n) to vertex_at(n + 1)."""
        return self.cycle[n % len(self.cycle)]

    def point_at(self, sigma: Real) -> TreePoint:
        """TreePoint at arclength sigma."""
        scale = self.tree.scale
        n = math.floor(sigma / scale)
        rest = sigma - n * scale
        if rest >= scale:
            n, rest = n + 1, 0
        if rest <= 0:
            return TreePoint(self.vertex_at(n))
        return self.tree.normalize(self.vertex_at(n), self.step_at(n), rest)

    def index_of(self, vertex: Word) -> Optional[int]:
        """Edge index of a vertex on the axis, or None off the axis."""
        path = concat(invert(self.origin), vertex)
        length = len(self.cycle)
        if all(path[i] == self.cycle[i % length] for i in range(len(path))):
            return len(path)
        if all(
            path[i] == self._backward[i % length] for i in range(len(path))
        ):
            return -len(path)
        return None

    def foot_of_vertex(self, vertex: Word) -> Tuple[int, Real]:
        """Index of the nearest axis vertex and the distance to it."""
        for candidate in self.tree.vertex_path(vertex, self.origin):
            index = self.index_of(candidate)
            if index is not None:
                return index, self.tree.vertex_distance(vertex, candidate)
        raise InternalConsistencyError(f"{self!r} misses its own origin")

    def project(self, point: TreePoint) -> Tuple[Real, Real]:
        """
        Nearest point of the axis.

        Args:
            point (TreePoint): Point to project.

        Returns:
            Tuple[Real, Real]: Arclength of the foot and distance to it.
        """
        scale = self.tree.scale
        if point.step is None:
            index, dist = self.foot_of_vertex(point.vertex)
            return index * scale, dist
        child = point.vertex + (point.step,)
        parent_index = self.index_of(point.vertex)
        child_index = self.index_of(child)
        if parent_index is not None and child_index is not None:
            direction = child_index - parent_index
            return parent_index * scale + direction * point.offset, 0
        parent_foot, parent_dist = self.foot_of_vertex(point.vertex)
        child_foot, child_dist = self.foot_of_vertex(child)
        via_parent = point.offset + parent_dist
        via_child = scale - point.offset + child_dist
        if via_parent <= via_child:
            return parent_foot * scale, via_parent
        return child_foot * scale, via_child

    def line_pair(self, other: "Axis", max_overlap: int) -> LinePair:
        """
        Closest stretch between this axis and another one.

        Args:
            other (Axis): Second axis, in the same tree.
            max_overlap (int): Edge budget for walking a shared stretch.

        Returns:
            LinePair: Overlap interval or bridge feet, with the gap.

        Raises:
            InternalConsistencyError: If the axes coincide.
        """
        scale = self.tree.scale
        n1, _ = self.foot_of_vertex(other.origin)
        p = self.vertex_at(n1)
        n2, gap = other.foot_of_vertex(p)
        if gap > 0:
            return LinePair(n1 * scale, n1 * scale, n2 * scale, 1, gap)
        orientation = 1
        for delta in (1, -1):
            index = other.index_of(self.vertex_at(n1 + delta))
            if index is not None:
                orientation = delta * (index - n2)
                break
        forward = self._shared_run(other, n1, n2, orientation, 1, max_overlap)
        backward = self._shared_run(
            other, n1, n2, orientation, -1, max_overlap
        )
        return LinePair(
            (n1 - backward) * scale,
            (n1 + forward) * scale,
            (n2 - orientation * backward) * scale,
            orientation,
            0,
        )

    def _shared_run(
        self,
        other: "Axis",
        n1: int,
        n2: int,
        orientation: int,
        direction: int,
        max_overlap: int,
    ) -> int:
        run = 0
        while other.index_of(
            self.vertex_at(n1 + direction * (run + 1))
        ) == n2 + orientation * direction * (run + 1):
            run += 1
            if run > max_overlap:
                raise InternalConsistencyError(
                    f"{self!r} and {other!r} share an unbounded stretch"
                )
        return run
