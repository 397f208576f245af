"""
Random points of the model.

Points are drawn on rational lattices so that base arithmetic stays
exact; every draw consumes only the generator it is given.
"""

# Standard library imports
from fractions import Fraction
from typing import Optional, Tuple

# Third-party imports
import numpy as np

# Local project imports
from core.geometry.flip_complex import (
    BasePos,
    CollarPoint,
    FlipComplex,
    PieceCopy,
    PointCoord,
    WallId,
)
from core.geometry.free_group import Word
from core.geometry.spine_tree import TreePoint
from core.sampling import choose, random_fraction


class PointSampler:
    """
    Draw copies, base positions and points of a FlipComplex.

    Attributes:
        complex (FlipComplex): Model to sample from.
        fiber_range (int): Fiber coordinates lie in
            [-fiber_range, fiber_range].
        base_radius (int): Tree points lie within this many edges of the
            copy's base vertex; collar arclengths within this many periods.
        copy_depth (int): Largest address length of a random copy.
    """

    def __init__(
        self,
        complex_: FlipComplex,
        fiber_range: int = 3,
        base_radius: int = 3,
        copy_depth: int = 2,
    ) -> None:
        self.complex = complex_
        self.fiber_range = fiber_range
        self.base_radius = base_radius
        self.copy_depth = copy_depth

    def __repr__(self) -> str:
        return (
            f"PointSampler(fiber_range={self.fiber_range}, "
            f"base_radius={self.base_radius}, copy_depth={self.copy_depth})"
        )

    def random_wall(self, rng: np.random.Generator, copy: PieceCopy) -> WallId:
        """A wall of the copy whose coset has length at most one."""
        return choose(rng, self.complex.walls_of(copy, 1))

    def walk(
        self, rng: np.random.Generator, start: PieceCopy, steps: int
    ) -> PieceCopy:
        """Copy reached by a non-backtracking walk in the dual tree."""
        copy = start
        previous: Optional[PieceCopy] = None
        for _ in range(steps):
            options = [
                wall
                for wall in self.complex.walls_of(copy, 1)
                if self.complex.neighbor_copy(wall) != previous
            ]
            if not options:
                break
            previous, copy = copy, self.complex.neighbor_copy(
                choose(rng, options)
            )
        return copy

    def random_copy(
        self, rng: np.random.Generator, depth: Optional[int] = None
    ) -> PieceCopy:
        """Copy at a random depth up to copy_depth, away from the root."""
        limit = self.copy_depth if depth is None else depth
        steps = int(rng.integers(0, limit + 1))
        copy = self.complex.root
        for _ in range(steps):
            entry = self.complex.entry_key(copy)
            options = [
                wall
                for wall in self.complex.walls_of(copy, 1)
                if wall.key != entry
            ]
            if not options:
                break
            copy = self.complex.neighbor_copy(choose(rng, options))
        return copy

    def random_tree_point(
        self, rng: np.random.Generator, piece: int
    ) -> TreePoint:
        """Vertex or interior edge point near the base vertex."""
        tree = self.complex.trees[piece]
        vertex: Word = ()
        for _ in range(int(rng.integers(0, self.base_radius + 1))):
            vertex = vertex + (choose(rng, tree.children(vertex)),)
        if rng.random() < 0.5:
            return TreePoint(vertex)
        step = choose(rng, tree.children(vertex))
        offset = tree.scale * Fraction(int(rng.integers(1, 8)), 8)
        return tree.normalize(vertex, step, offset)

    def random_collar_point(
        self,
        rng: np.random.Generator,
        copy: PieceCopy,
        wall: Optional[WallId] = None,
        on_wall: bool = False,
    ) -> CollarPoint:
        """Collar point over a wall of the copy; on the line if on_wall."""
        chosen = wall or self.random_wall(rng, copy)
        cycle, coset = self.complex.wall_key_in(chosen, copy)
        collar = self.complex.collar(copy.piece)
        period = self.complex.period(copy.piece, cycle)
        sigma = period * random_fraction(
            rng, -self.base_radius, self.base_radius
        )
        height = (
            collar
            if on_wall
            else collar * Fraction(int(rng.integers(1, 5)), 4)
        )
        return CollarPoint(cycle, coset, sigma, height)

    def random_base(
        self, rng: np.random.Generator, copy: PieceCopy
    ) -> BasePos:
        """Tree point or collar point of a copy, evenly split."""
        if rng.random() < 0.5:
            return self.random_tree_point(rng, copy.piece)
        return self.random_collar_point(rng, copy)

    def random_fiber(self, rng: np.random.Generator) -> Fraction:
        """Fiber coordinate on the 1/8 lattice."""
        return random_fraction(rng, -self.fiber_range, self.fiber_range)

    def random_point(
        self, rng: np.random.Generator, copy: Optional[PieceCopy] = None
    ) -> PointCoord:
        """Point of a given or random copy."""
        chosen = copy or self.random_copy(rng)
        return PointCoord(
            chosen, self.random_base(rng, chosen), self.random_fiber(rng)
        )

    def random_wall_point(
        self,
        rng: np.random.Generator,
        copy: PieceCopy,
        wall: Optional[WallId] = None,
    ) -> PointCoord:
        """Point on a wall of the copy, in the copy's chart."""
        return PointCoord(
            copy,
            self.random_collar_point(rng, copy, wall, on_wall=True),
            self.random_fiber(rng),
        )

    def random_pair(
        self, rng: np.random.Generator, max_walls: int
    ) -> Tuple[PointCoord, PointCoord]:
        """Two points whose copies are at most max_walls apart."""
        x = self.random_point(rng)
        far = self.walk(rng, x.copy, int(rng.integers(0, max_walls + 1)))
        return x, self.random_point(rng, far)
