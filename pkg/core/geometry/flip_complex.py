"""
Metric model of the universal cover of a flip graph manifold.

Each piece copy is (spine tree) x (fiber line). Boundary lines sit at
collar height above the axes of the conjugated boundary cycles, walls
are (boundary line) x (fiber line), and neighbouring copies are glued
by the coordinate flip (s, t) -> (t + sigma, s + tau).

Copies are addressed by reduced sequences of wall crossings from the
root copy. Everything is computed lazily; caches are filled under a
lock so concurrent queries see the same values a sequential run would.
"""

# Standard library imports
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

# Third-party imports
import networkx as nx

# Local project imports
from core.errors import InternalConsistencyError, NotOnWallError
from core.geometry.free_group import (
    Letter,
    Word,
    concat,
    invert,
    power,
    word_key,
)
from core.geometry.metrics import ProductMetricProtocol, L2Metric
from core.geometry.spec_loader import FlipManifoldSpec
from core.geometry.spine_tree import Axis, LinePair, Real, SpineTree, TreePoint
from core.logger import logger

WallKey = Tuple[int, Word]


@dataclass(frozen=True)
class Step:
    """Crossing of the wall (cycle, coset) of the current copy."""

    cycle: int
    coset: Word

    def __repr__(self) -> str:
        return f"Step({self.cycle}, {self.coset!r})"


@dataclass(frozen=True)
class PieceCopy:
    """A vertex of the dual tree: a reduced address from the root copy."""

    address: Tuple[Step, ...] = ()
    piece: int = 0

    def __repr__(self) -> str:
        return f"PieceCopy(piece={self.piece}, address={self.address!r})"

    @property
    def depth(self) -> int:
        """Number of walls between this copy and the root copy."""
        return len(self.address)


@dataclass(frozen=True)
class WallId:
    """A wall of `owner`, named by boundary cycle and canonical coset."""

    owner: PieceCopy
    cycle: int
    coset: Word

    def __repr__(self) -> str:
        return f"WallId({self.owner!r}, {self.cycle}, {self.coset!r})"

    @property
    def key(self) -> WallKey:
        """Name of the wall inside its owner copy."""
        return self.cycle, self.coset


@dataclass(frozen=True)
class CollarPoint:
    """
    Base point hanging over a boundary axis.

    Height runs in (0, collar]; height equal to the collar width puts the
    point on the boundary line, i.e. on the wall.
    """

    cycle: int
    coset: Word
    sigma: Real
    height: Real

    def __repr__(self) -> str:
        return (
            f"CollarPoint({self.cycle}, {self.coset!r}, "
            f"sigma={self.sigma!r}, height={self.height!r})"
        )

    @property
    def key(self) -> WallKey:
        """Wall this collar hangs from."""
        return self.cycle, self.coset


BasePos = Union[TreePoint, CollarPoint]


@dataclass(frozen=True)
class PointCoord:
    """A point of the model: copy, base position and fiber coordinate."""

    copy: PieceCopy
    base: BasePos
    fiber: Real

    def __repr__(self) -> str:
        return f"PointCoord({self.copy!r}, {self.base!r}, {self.fiber!r})"


@dataclass(frozen=True)
class ModelConstants:
    """Wall separation rho, slice diameter delta and the search radius."""

    rho: Real
    delta: Real
    radius: int


@dataclass(frozen=True)
class RhoEstimate:
    """Closest wall pair found and the radius that was searched."""

    rho: Real
    radius: int
    piece: int
    walls: Tuple[WallKey, WallKey]


class FlipComplex:
    """
    Lazily explored universal cover of a flip manifold.

    Attributes:
        spec (FlipManifoldSpec): The validated manifold description.
        trees (List[SpineTree]): Spine tree of every piece.
        root (PieceCopy): Copy of piece 0 at the empty address.
    """

    def __init__(
        self, spec: FlipManifoldSpec, coset_search_bound: int = 12
    ) -> None:
        """Build spine trees, boundary elements and empty caches."""
        self.spec = spec
        self.coset_search_bound = coset_search_bound
        self.trees = [
            SpineTree(piece.edges, piece.base_scale) for piece in spec.pieces
        ]
        self.root = PieceCopy((), 0)
        self.tails: List[List[Word]] = []
        self.boundary_elements: List[List[Word]] = []
        for index, piece in enumerate(spec.pieces):
            tails = [
                self._tail(index, self.trees[index].letter_ends(cycle[0])[0])
                for cycle in piece.boundary_cycles
            ]
            self.tails.append(tails)
            self.boundary_elements.append(
                [
                    concat(tail, cycle, invert(tail))
                    for tail, cycle in zip(tails, piece.boundary_cycles)
                ]
            )
        self._axes: Dict[Tuple[int, WallKey], Axis] = {}
        self._cosets: Dict[Tuple[int, int, Word], Tuple[Word, int]] = {}
        self._pairs: Dict[Tuple[int, WallKey, WallKey], LinePair] = {}
        # Lock to prevent race conditions
        self._cache_lock = threading.Lock()

    def __repr__(self) -> str:
        return f"FlipComplex({self.spec!r})"

    def _tail(self, piece: int, vertex: int) -> Word:
        """Spanning-tree path from spine vertex 0 to the given vertex."""
        if vertex == 0:
            return ()
        tree = self.trees[piece]
        graph = nx.MultiGraph()
        for label, (v, w) in tree.edges.items():
            graph.add_edge(v, w, key=label)
        route = nx.shortest_path(graph, 0, vertex)
        letters: List[Letter] = []
        for start, end in zip(route, route[1:]):
            label = min(
                graph[start][end], key=lambda name: tree.order[name]
            )
            forward = tree.edges[label] == (start, end)
            letters.append((label, 1 if forward else -1))
        return tuple(letters)

    # ------------------------------------------------------------------
    # Pieces, walls and the dual tree
    # ------------------------------------------------------------------

    def collar(self, piece: int) -> Fraction:
        """Collar width of a piece."""
        return self.spec.pieces[piece].collar_width

    def period(self, piece: int, cycle: int) -> Fraction:
        """Arclength of one traversal of a boundary cycle."""
        return self.spec.pieces[piece].cycle_length(cycle)

    def piece_of(self, address: Sequence[Step], root_piece: int = 0) -> int:
        """Piece type reached by following an address."""
        piece = root_piece
        for step in address:
            piece = self.spec.partner(piece, step.cycle)[0]
        return piece

    def copy_at(self, address: Sequence[Step]) -> PieceCopy:
        """PieceCopy for an address from the root copy."""
        address = tuple(address)
        return PieceCopy(address, self.piece_of(address))

    def axis(self, piece: int, key: WallKey) -> Axis:
        """Axis of the boundary line named key in a copy of piece."""
        with self._cache_lock:
            cached = self._axes.get((piece, key))
        if cached is not None:
            return cached
        cycle, coset = key
        axis = Axis(
            self.trees[piece],
            concat(coset, self.tails[piece][cycle]),
            self.spec.pieces[piece].boundary_cycles[cycle],
        )
        with self._cache_lock:
            return self._axes.setdefault((piece, key), axis)

    def canonical_coset(
        self, piece: int, cycle: int, element: Word
    ) -> Tuple[Word, int]:
        """
        Canonical representative of element * <c>.

        Args:
            piece (int): Piece index.
            cycle (int): Boundary cycle index.
            element (Word): Loop at spine vertex 0.

        Returns:
            Tuple[Word, int]: (rep, m) with element = rep * c**m, rep
            shortest and lexicographically least.
        """
        cache_key = (piece, cycle, element)
        with self._cache_lock:
            cached = self._cosets.get(cache_key)
        if cached is not None:
            return cached
        order = self.trees[piece].order
        boundary = self.boundary_elements[piece][cycle]
        low, high = -self.coset_search_bound, self.coset_search_bound
        while True:
            candidates = [
                (word_key(concat(element, power(boundary, n)), order), n)
                for n in range(low, high + 1)
            ]
            _, best = min(candidates)
            if low < best < high:
                break
            low, high = low * 2, high * 2
        result = (concat(element, power(boundary, best)), -best)
        with self._cache_lock:
            return self._cosets.setdefault(cache_key, result)

    def wall(self, copy: PieceCopy, cycle: int, element: Word) -> WallId:
        """WallId of the elevation element * c of a copy."""
        rep, _ = self.canonical_coset(copy.piece, cycle, element)
        return WallId(copy, cycle, rep)

    def entry_key(self, copy: PieceCopy) -> Optional[WallKey]:
        """Key of the wall leading back towards the root, if any."""
        if not copy.address:
            return None
        parent_piece = self.piece_of(copy.address[:-1])
        _, cycle = self.spec.partner(parent_piece, copy.address[-1].cycle)
        return cycle, ()

    def walls_of(self, copy: PieceCopy, radius: int) -> List[WallId]:
        """Walls of a copy whose canonical coset has length <= radius."""
        keys = set()
        piece = self.spec.pieces[copy.piece]
        for cycle in range(len(piece.boundary_cycles)):
            for element in self.trees[copy.piece].closed_words(radius):
                rep, _ = self.canonical_coset(copy.piece, cycle, element)
                if len(rep) <= radius:
                    keys.add((cycle, rep))
        order = self.trees[copy.piece].order
        return [
            WallId(copy, cycle, coset)
            for cycle, coset in sorted(
                keys, key=lambda k: (k[0], word_key(k[1], order))
            )
        ]

    def neighbor_copy(self, wall: WallId) -> PieceCopy:
        """Copy on the other side of a wall."""
        owner = wall.owner
        if self.entry_key(owner) == wall.key:
            return PieceCopy(
                owner.address[:-1], self.piece_of(owner.address[:-1])
            )
        partner_piece, _ = self.spec.partner(owner.piece, wall.cycle)
        return PieceCopy(
            owner.address + (Step(wall.cycle, wall.coset),), partner_piece
        )

    def wall_key_in(self, wall: WallId, copy: PieceCopy) -> WallKey:
        """
        Name of a wall inside one of its two copies.

        Raises:
            NotOnWallError: If copy is not adjacent to the wall.
        """
        if copy == wall.owner:
            return wall.key
        if copy != self.neighbor_copy(wall):
            raise NotOnWallError(f"{wall!r} does not bound {copy!r}")
        if copy.depth < wall.owner.depth:
            last = wall.owner.address[-1]
            return last.cycle, last.coset
        key = self.entry_key(copy)
        if key is None:
            raise InternalConsistencyError(f"{copy!r} has no entry wall")
        return key

    def same_wall(self, first: WallId, second: WallId) -> bool:
        """True if two WallIds name one wall, from either side."""
        if first == second:
            return True
        return (
            second.owner == self.neighbor_copy(first)
            and self.wall_key_in(first, second.owner) == second.key
        )

    def dual_tree_geodesic(
        self, a: PieceCopy, b: PieceCopy
    ) -> List[WallId]:
        """
        Walls crossed on the way from copy a to copy b.

        Every WallId is owned by the copy on the a side of the wall.
        """
        common = 0
        for first, second in zip(a.address, b.address):
            if first != second:
                break
            common += 1
        walls: List[WallId] = []
        for length in range(a.depth, common, -1):
            owner = self.copy_at(a.address[:length])
            key = self.entry_key(owner)
            if key is None:
                raise InternalConsistencyError(f"{owner!r} lost its parent")
            walls.append(WallId(owner, *key))
        for length in range(common, b.depth):
            owner = self.copy_at(b.address[:length])
            step = b.address[length]
            walls.append(WallId(owner, step.cycle, step.coset))
        return walls

    def dual_distance(self, a: PieceCopy, b: PieceCopy) -> int:
        """Number of walls between two copies."""
        common = 0
        for first, second in zip(a.address, b.address):
            if first != second:
                break
            common += 1
        return a.depth + b.depth - 2 * common

    # ------------------------------------------------------------------
    # Base geometry inside one piece
    # ------------------------------------------------------------------

    def collar_point(
        self, piece: int, key: WallKey, sigma: Real, height: Real
    ) -> BasePos:
        """Collar point, collapsed to its tree shadow at height zero."""
        if height <= 0:
            return self.axis(piece, key).point_at(sigma)
        return CollarPoint(key[0], key[1], sigma, height)

    def shadow(
        self, piece: int, base: BasePos
    ) -> Tuple[TreePoint, Real, Optional[WallKey]]:
        """Tree point below a base position, its height and its wall."""
        if isinstance(base, TreePoint):
            return base, 0, None
        return (
            self.axis(piece, base.key).point_at(base.sigma),
            base.height,
            base.key,
        )

    def base_distance(
        self, copy: Union[PieceCopy, int], p: BasePos, q: BasePos
    ) -> Real:
        """
        Exact distance between base positions of one copy.

        Args:
            copy (Union[PieceCopy, int]): The copy, or just its piece.
            p (BasePos): First position.
            q (BasePos): Second position.

        Returns:
            Real: Down the collar, through the tree, up the collar; along
            the collar when both points hang from the same wall.
        """
        piece = copy if isinstance(copy, int) else copy.piece
        if isinstance(p, CollarPoint) and isinstance(q, CollarPoint):
            if p.key == q.key:
                return abs(p.height - q.height) + abs(p.sigma - q.sigma)
        sp, hp, _ = self.shadow(piece, p)
        sq, hq, _ = self.shadow(piece, q)
        return hp + hq + self.trees[piece].point_distance(sp, sq)

    def project_to_line(
        self, copy: PieceCopy, p: BasePos, wall: WallId
    ) -> Tuple[CollarPoint, Real]:
        """
        Nearest point of a boundary line to a base position.

        Args:
            copy (PieceCopy): Copy holding p; the wall must bound it.
            p (BasePos): Position to project.
            wall (WallId): Wall whose boundary line is the target.

        Returns:
            Tuple[CollarPoint, Real]: The foot and the distance to it.
        """
        key = self.wall_key_in(wall, copy)
        collar = self.collar(copy.piece)
        if isinstance(p, CollarPoint) and p.key == key:
            foot = CollarPoint(key[0], key[1], p.sigma, collar)
            return foot, collar - p.height
        shadow, height, _ = self.shadow(copy.piece, p)
        sigma, dist = self.axis(copy.piece, key).project(shadow)
        foot = CollarPoint(key[0], key[1], sigma, collar)
        return foot, height + dist + collar

    def _key_order(self, piece: int, key: WallKey) -> Tuple[int, ...]:
        return (key[0],) + word_key(key[1], self.trees[piece].order)

    def line_pair(
        self, piece: int, first: WallKey, second: WallKey
    ) -> LinePair:
        """Relative position of two distinct boundary axes of a piece."""
        if first == second:
            raise InternalConsistencyError(f"identical walls {first!r}")
        if self._key_order(piece, first) > self._key_order(piece, second):
            return self.line_pair(piece, second, first).reversed()
        cache_key = (piece, first, second)
        with self._cache_lock:
            cached = self._pairs.get(cache_key)
        if cached is not None:
            return cached
        axis_one, axis_two = self.axis(piece, first), self.axis(piece, second)
        budget = 4 * (
            len(axis_one.origin)
            + len(axis_two.origin)
            + len(axis_one.cycle)
            + len(axis_two.cycle)
        ) + 8
        pair = axis_one.line_pair(axis_two, budget)
        with self._cache_lock:
            return self._pairs.setdefault(cache_key, pair)

    def line_to_line_bridge(
        self, copy: PieceCopy, w1: WallId, w2: WallId
    ) -> Tuple[CollarPoint, CollarPoint]:
        """
        Closest pair of points on two distinct boundary lines of a copy.

        Raises:
            InternalConsistencyError: If both walls are the same.
        """
        first = self.wall_key_in(w1, copy)
        second = self.wall_key_in(w2, copy)
        s, t = self.line_pair(copy.piece, first, second).bridge()
        collar = self.collar(copy.piece)
        return (
            CollarPoint(first[0], first[1], s, collar),
            CollarPoint(second[0], second[1], t, collar),
        )

    def act_base(self, piece: int, element: Word, base: BasePos) -> BasePos:
        """Deck translation of a base position by a loop at vertex 0."""
        if isinstance(base, TreePoint):
            return self.trees[piece].act(element, base)
        rep, shift = self.canonical_coset(
            piece, base.cycle, concat(element, base.coset)
        )
        return CollarPoint(
            base.cycle,
            rep,
            base.sigma + shift * self.period(piece, base.cycle),
            base.height,
        )

    def base_point_along(
        self, piece: int, p: BasePos, q: BasePos, dist: Real
    ) -> BasePos:
        """Point at distance dist from p on the base geodesic to q."""
        if (
            isinstance(p, CollarPoint)
            and isinstance(q, CollarPoint)
            and p.key == q.key
        ):
            climb = abs(q.height - p.height)
            if dist <= climb:
                direction = 1 if q.height >= p.height else -1
                return self.collar_point(
                    piece, p.key, p.sigma, p.height + direction * dist
                )
            direction = 1 if q.sigma >= p.sigma else -1
            return self.collar_point(
                piece, p.key, p.sigma + direction * (dist - climb), q.height
            )
        sp, hp, _ = self.shadow(piece, p)
        sq, _, _ = self.shadow(piece, q)
        through = self.trees[piece].point_distance(sp, sq)
        if dist <= hp and isinstance(p, CollarPoint):
            return self.collar_point(piece, p.key, p.sigma, hp - dist)
        if dist <= hp + through or not isinstance(q, CollarPoint):
            return self.trees[piece].point_along(sp, sq, dist - hp)
        return self.collar_point(piece, q.key, q.sigma, dist - hp - through)

    # ------------------------------------------------------------------
    # Points on walls and the flip gluing
    # ------------------------------------------------------------------

    def on_wall_key(self, x: PointCoord) -> Optional[WallKey]:
        """Wall of x's copy containing x, if x lies on one."""
        base = x.base
        if isinstance(base, CollarPoint) and base.height >= self.collar(
            x.copy.piece
        ):
            return base.key
        return None

    def copies_of(self, x: PointCoord) -> List[PieceCopy]:
        """Copies containing x, the one nearer the root first."""
        key = self.on_wall_key(x)
        if key is None:
            return [x.copy]
        other = self.neighbor_copy(WallId(x.copy, *key))
        return sorted([x.copy, other], key=lambda copy: copy.depth)

    def map_across(
        self, piece: int, cycle: int, s: Real, t: Real
    ) -> Tuple[Real, Real]:
        """Wall coordinates seen from the far side of a gluing."""
        index, is_source = self.spec.gluing_of(piece, cycle)
        sigma, tau = self.spec.gluings[index].offsets
        if is_source:
            return t + sigma, s + tau
        return t - tau, s - sigma

    def flip(
        self, wall: WallId, coords: Tuple[Real, Real]
    ) -> Tuple[Real, Real]:
        """Owner-side wall coordinates to neighbour-side coordinates."""
        return self.map_across(wall.owner.piece, wall.cycle, *coords)

    def unflip(
        self, wall: WallId, coords: Tuple[Real, Real]
    ) -> Tuple[Real, Real]:
        """Neighbour-side wall coordinates back to owner-side ones."""
        neighbor = self.neighbor_copy(wall)
        cycle, _ = self.wall_key_in(wall, neighbor)
        return self.map_across(neighbor.piece, cycle, *coords)

    def transfer(self, x: PointCoord, target: PieceCopy) -> PointCoord:
        """
        Represent x in another copy containing it.

        Raises:
            NotOnWallError: If x does not lie in the target copy.
        """
        if target == x.copy:
            return x
        key = self.on_wall_key(x)
        if key is None:
            raise NotOnWallError(f"{x!r} is not on a wall of {target!r}")
        wall = WallId(x.copy, *key)
        if self.neighbor_copy(wall) != target:
            raise NotOnWallError(f"{x!r} is not on a wall of {target!r}")
        base = x.base
        if not isinstance(base, CollarPoint):
            raise InternalConsistencyError(
                f"{x!r} has a wall key but no collar base"
            )
        s, t = self.map_across(x.copy.piece, key[0], base.sigma, x.fiber)
        cycle, coset = self.wall_key_in(wall, target)
        return PointCoord(
            target, CollarPoint(cycle, coset, s, self.collar(target.piece)), t
        )

    def canonical_point(self, x: PointCoord) -> PointCoord:
        """x represented in the copy nearest the root."""
        return self.transfer(x, self.copies_of(x)[0])

    def wall_coords(self, wall: WallId, x: PointCoord) -> Tuple[Real, Real]:
        """
        Owner-side (arclength, fiber) coordinates of a wall point.

        Raises:
            NotOnWallError: If x is not on the wall.
        """
        local = self.transfer(x, wall.owner)
        if self.on_wall_key(local) != wall.key:
            raise NotOnWallError(f"{x!r} is not on {wall!r}")
        return local.base.sigma, local.fiber  # type: ignore[union-attr]

    def _fiber_for_partner_sigma(
        self, piece: int, cycle: int, partner_sigma: Real
    ) -> Real:
        index, is_source = self.spec.gluing_of(piece, cycle)
        sigma, tau = self.spec.gluings[index].offsets
        return partner_sigma - sigma if is_source else partner_sigma + tau

    def wall_point_from_sigmas(
        self, wall: WallId, owner_sigma: Real, neighbor_sigma: Real
    ) -> PointCoord:
        """
        Intersection of the two arclength lines of a wall.

        The point has arclength owner_sigma seen from the owner and
        neighbor_sigma seen from the neighbour; it is returned in the
        copy nearer the root, computed directly in that side's chart.
        """
        neighbor = self.neighbor_copy(wall)
        if wall.owner.depth <= neighbor.depth:
            side, key = wall.owner, wall.key
            own, other = owner_sigma, neighbor_sigma
        else:
            side = neighbor
            key = self.wall_key_in(wall, neighbor)
            own, other = neighbor_sigma, owner_sigma
        fiber = self._fiber_for_partner_sigma(side.piece, key[0], other)
        collar = self.collar(side.piece)
        return PointCoord(
            side, CollarPoint(key[0], key[1], own, collar), fiber
        )

    # ------------------------------------------------------------------
    # Distances inside one copy
    # ------------------------------------------------------------------

    def product_distance(
        self,
        copy: PieceCopy,
        x: PointCoord,
        y: PointCoord,
        metric: Optional[ProductMetricProtocol] = None,
    ) -> Real:
        """Product-metric distance of two points of one copy."""
        metric = metric or L2Metric()
        first, second = self.transfer(x, copy), self.transfer(y, copy)
        return metric.combine(
            self.base_distance(copy, first.base, second.base),
            second.fiber - first.fiber,
        )

    def shared_copy(self, x: PointCoord, y: PointCoord) -> Optional[PieceCopy]:
        """A copy containing both points, if any."""
        others = self.copies_of(y)
        for copy in self.copies_of(x):
            if copy in others:
                return copy
        return None

    def segment_points(
        self, copy: PieceCopy, x: PointCoord, y: PointCoord, spacing: float
    ) -> List[PointCoord]:
        """Sample points along the L2 geodesic from x to y in a copy."""
        first, second = self.transfer(x, copy), self.transfer(y, copy)
        base_length = self.base_distance(copy, first.base, second.base)
        rise = second.fiber - first.fiber
        length = L2Metric().combine(base_length, rise)
        count = max(1, math.ceil(float(length) / spacing))
        points = [first]
        for index in range(1, count):
            fraction = Fraction(index, count)
            points.append(
                PointCoord(
                    copy,
                    self.base_point_along(
                        copy.piece,
                        first.base,
                        second.base,
                        base_length * fraction,
                    ),
                    first.fiber + rise * fraction,
                )
            )
        points.append(second)
        return points

    # ------------------------------------------------------------------
    # Deck action
    # ------------------------------------------------------------------

    def transport_vertex(
        self,
        piece: int,
        element: Word,
        fiber_power: int,
        address: Tuple[Step, ...],
        base: BasePos,
        fiber: Real,
    ) -> Tuple[Tuple[Step, ...], BasePos, Real]:
        """
        Act by the vertex element (element, fiber_power) of a root piece.

        Args:
            piece (int): Piece type of the root copy of the chart.
            element (Word): Free part, a loop at spine vertex 0.
            fiber_power (int): Fiber exponent.
            address (Tuple[Step, ...]): Copy address in the chart.
            base (BasePos): Base position inside that copy.
            fiber (Real): Fiber coordinate inside that copy.

        Returns:
            Tuple: The image address, base position and fiber.
        """
        moved: List[Step] = []
        current, free, exponent = piece, element, fiber_power
        for step in address:
            rep, shift = self.canonical_coset(
                current, step.cycle, concat(free, step.coset)
            )
            moved.append(Step(step.cycle, rep))
            partner_piece, partner_cycle = self.spec.partner(
                current, step.cycle
            )
            free = power(
                self.boundary_elements[partner_piece][partner_cycle], exponent
            )
            exponent = shift
            current = partner_piece
        period = self.spec.pieces[current].fiber_period
        return (
            tuple(moved),
            self.act_base(current, free, base),
            fiber + exponent * period,
        )

    def transport_stable(
        self, gluing: int, sign: int, address: Tuple[Step, ...]
    ) -> Tuple[Step, ...]:
        """
        Change of chart along a stable letter.

        The letter t (sign +1) carries charts rooted at its target piece
        to charts rooted at its source piece; sign -1 goes back.
        """
        spec = self.spec.gluings[gluing]
        if sign > 0:
            strip, push = spec.target[1], spec.source[1]
        else:
            strip, push = spec.source[1], spec.target[1]
        if address and address[0] == Step(strip, ()):
            return address[1:]
        return (Step(push, ()),) + address

    # ------------------------------------------------------------------
    # Wall separation
    # ------------------------------------------------------------------

    def rho_details(self, radius: int) -> RhoEstimate:
        """
        Closest pair of distinct boundary lines within a radius.

        The radius grows until some piece has two walls in range.
        """
        floor = min(
            2 * self.collar(index) for index in range(len(self.spec.pieces))
        )
        current = max(1, radius)
        while True:
            best: Optional[RhoEstimate] = None
            for index in range(len(self.spec.pieces)):
                walls = self.walls_of(PieceCopy((), index), current)
                keys = [wall.key for wall in walls]
                twice_collar = 2 * self.collar(index)
                for i, first in enumerate(keys):
                    for second in keys[i + 1 :]:
                        pair = self.line_pair(index, first, second)
                        value = twice_collar + pair.gap
                        if best is None or value < best.rho:
                            best = RhoEstimate(
                                value, current, index, (first, second)
                            )
                        if best.rho <= floor:
                            return best
            if best is not None:
                return best
            logger.warning(
                "Fewer than two walls within radius %d, growing", current
            )
            current += 1
            if current > radius + 16:
                raise InternalConsistencyError("no pair of walls found")

    def estimate_rho(self, radius: int) -> Real:
        """Minimum distance between distinct walls within a radius."""
        return self.rho_details(radius).rho
