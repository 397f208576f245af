"""
Special paths.

A special path from x to y follows the dual-tree geodesic between their
copies. Inside every copy it runs from the line it entered through to
the line it leaves through along the shortest base bridge; on each wall
it turns at the intersection of the two coordinate lines fixed by the
bridges on either side. Lengths are measured with the L1 or L2 product
metric of each copy.
"""

# Standard library imports
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple

# Local project imports
from core.errors import InternalConsistencyError, NotOnWallError
from core.geometry.distance_oracle import DistanceOracle
from core.geometry.flip_complex import (
    BasePos,
    CollarPoint,
    FlipComplex,
    PieceCopy,
    PointCoord,
    WallId,
)
from core.geometry.metrics import L1Metric, ProductMetricProtocol, get_metric
from core.geometry.point_sampler import PointSampler
from core.geometry.spec_loader import FlipManifoldSpec
from core.geometry.spine_tree import Real
from core.logger import logger
from core.sampling import parallel_map, spawn_generators


@dataclass(frozen=True)
class SpecialPath:
    """
    Breakpoints x_0, ..., x_{n+1} and the data they were built from.

    Attributes:
        breakpoints: Endpoints and wall points, each in its canonical chart.
        copies: Copy holding segment i, from x_i to x_{i+1}.
        walls: Wall between copies i and i + 1, owned by copy i.
        bridges: Base positions (p_i, q_i) of segment i in copy i.
    """

    breakpoints: Tuple[PointCoord, ...]
    copies: Tuple[PieceCopy, ...]
    walls: Tuple[WallId, ...]
    bridges: Tuple[Tuple[BasePos, BasePos], ...]

    def __repr__(self) -> str:
        return (
            f"SpecialPath(walls={len(self.walls)}, "
            f"breakpoints={len(self.breakpoints)})"
        )

    @property
    def wall_count(self) -> int:
        """Number of walls crossed."""
        return len(self.walls)

    def segments(self) -> List[Tuple[PieceCopy, PointCoord, PointCoord]]:
        """Copy and endpoints of every segment."""
        return [
            (copy, self.breakpoints[index], self.breakpoints[index + 1])
            for index, copy in enumerate(self.copies)
        ]


@dataclass
class QGReport:
    """Least kappa with length <= kappa * d + kappa over the samples."""

    kappa: float
    samples: int
    worst_ratio: float
    metric: str
    rows: List[Dict[str, Any]] = field(default_factory=list)

    def __repr__(self) -> str:
        return (
            f"QGReport(kappa={self.kappa:.4f}, samples={self.samples}, "
            f"worst_ratio={self.worst_ratio:.4f}, metric={self.metric})"
        )


class SpecialPathSystem:
    """
    Special paths, their lengths and bounds on a FlipComplex.

    Attributes:
        complex (FlipComplex): The model.
        rho_radius (int): Radius for the wall separation estimate.
    """

    def __init__(self, complex_: FlipComplex, rho_radius: int = 4) -> None:
        self.complex = complex_
        self.rho_radius = rho_radius

    def __repr__(self) -> str:
        return f"SpecialPathSystem(rho_radius={self.rho_radius})"

    @cached_property
    def rho(self) -> Real:
        """Wall separation estimated at rho_radius."""
        return self.complex.estimate_rho(self.rho_radius)

    def choose_copies(
        self, x: PointCoord, y: PointCoord
    ) -> Tuple[PieceCopy, PieceCopy]:
        """
        Copies of x and y closest in the dual tree.

        Ties (both points on one wall) go to the copy nearer the root.
        """
        options = [
            (self.complex.dual_distance(a, b), a.depth + b.depth, a, b)
            for a in self.complex.copies_of(x)
            for b in self.complex.copies_of(y)
        ]
        _, _, first, second = min(options, key=lambda item: item[:2])
        return first, second

    def special_path(self, x: PointCoord, y: PointCoord) -> SpecialPath:
        """
        Build the special path from x to y.

        Args:
            x (PointCoord): Start point.
            y (PointCoord): End point.

        Returns:
            SpecialPath: A single segment when x and y share a copy.
        """
        complex_ = self.complex
        start, end = self.choose_copies(x, y)
        walls = complex_.dual_tree_geodesic(start, end)
        first = complex_.transfer(x, start)
        last = complex_.transfer(y, end)
        if not walls:
            return SpecialPath(
                (complex_.canonical_point(x), complex_.canonical_point(y)),
                (start,),
                (),
                ((first.base, last.base),),
            )
        copies = [start] + [complex_.neighbor_copy(wall) for wall in walls]
        bridges: List[Tuple[BasePos, BasePos]] = []
        foot, _ = complex_.project_to_line(start, first.base, walls[0])
        bridges.append((first.base, foot))
        for index in range(1, len(walls)):
            bridges.append(
                complex_.line_to_line_bridge(
                    copies[index], walls[index - 1], walls[index]
                )
            )
        foot, _ = complex_.project_to_line(end, last.base, walls[-1])
        bridges.append((foot, last.base))
        points = [complex_.canonical_point(x)]
        for index, wall in enumerate(walls):
            leaving = bridges[index][1]
            entering = bridges[index + 1][0]
            if not isinstance(leaving, CollarPoint) or not isinstance(
                entering, CollarPoint
            ):
                raise InternalConsistencyError(
                    f"bridges at {wall!r} do not end on its boundary lines"
                )
            points.append(
                complex_.wall_point_from_sigmas(
                    wall, leaving.sigma, entering.sigma
                )
            )
        points.append(complex_.canonical_point(y))
        return SpecialPath(
            tuple(points), tuple(copies), tuple(walls), tuple(bridges)
        )

    def path_length(
        self, path: SpecialPath, metric: Optional[ProductMetricProtocol] = None
    ) -> Real:
        """Sum of segment lengths in the given product metric."""
        chosen = metric or get_metric("L2")
        return sum(
            (
                self.complex.product_distance(copy, start, end, chosen)
                for copy, start, end in path.segments()
            ),
            start=0,
        )

    def chain_bound(self, path: SpecialPath) -> Real:
        """Base length of the path: entry, bridges and exit in sequence."""
        return sum(
            (
                self.complex.base_distance(copy, p, q)
                for copy, (p, q) in zip(path.copies, path.bridges)
            ),
            start=0,
        )

    def distance_lower_bound(self, x: PointCoord, y: PointCoord) -> Real:
        """
        Lower bound on d(x, y).

        Exact in one copy; otherwise the larger of (pieces - 2) * rho and
        the base length forced by crossing the walls in order.
        """
        shared = self.complex.shared_copy(x, y)
        if shared is not None:
            return self.complex.product_distance(shared, x, y)
        path = self.special_path(x, y)
        pieces = path.wall_count + 1
        return max((pieces - 2) * self.rho, self.chain_bound(path))

    def horizontal_slide(
        self, x: PointCoord, y: PointCoord, z: PointCoord
    ) -> Tuple[PointCoord, Real]:
        """
        Slide y along its wall to the foot of x's base.

        Args:
            x (PointCoord): Point on one side of the wall.
            y (PointCoord): Point on the wall.
            z (PointCoord): Point on the other side.

        Returns:
            Tuple[PointCoord, Real]: The slid point w and the L1 change
            |x-w| + |w-z| - |x-y| - |y-z|.

        Raises:
            NotOnWallError: If y's wall does not separate the copies of
            x and z.
        """
        complex_ = self.complex
        sides = complex_.copies_of(y)
        if len(sides) != 2:
            raise NotOnWallError(f"{y!r} is not on a wall")
        pairs = [
            (a, b)
            for a in complex_.copies_of(x)
            for b in complex_.copies_of(z)
            if a in sides and b in sides and a != b
        ]
        if not pairs:
            raise NotOnWallError(
                f"the wall of {y!r} does not separate {x!r} and {z!r}"
            )
        near, far = pairs[0]
        local_y = complex_.transfer(y, near)
        key = complex_.on_wall_key(local_y)
        if key is None:
            raise InternalConsistencyError(
                f"{local_y!r} is off its wall after transfer"
            )
        wall = WallId(near, *key)
        foot, _ = complex_.project_to_line(
            near, complex_.transfer(x, near).base, wall
        )
        w = PointCoord(near, foot, local_y.fiber)
        metric = L1Metric()
        before = complex_.product_distance(
            near, x, y, metric
        ) + complex_.product_distance(far, y, z, metric)
        after = complex_.product_distance(
            near, x, w, metric
        ) + complex_.product_distance(far, w, z, metric)
        return complex_.canonical_point(w), after - before

    def segment_points(
        self, path: SpecialPath, spacing: float
    ) -> List[PointCoord]:
        """Points along the path, at most spacing apart in each segment."""
        points: List[PointCoord] = []
        for copy, start, end in path.segments():
            sampled = self.complex.segment_points(copy, start, end, spacing)
            points.extend(sampled if not points else sampled[1:])
        return points

    def qg_fit(
        self,
        samples: int,
        max_walls: int,
        resolution: float,
        seed: int,
        sampler: Optional[PointSampler] = None,
        oracle: Optional[DistanceOracle] = None,
        metric: str = "L1",
    ) -> QGReport:
        """
        Fit the uniform quasi-geodesic constant of special paths.

        Args:
            samples (int): Number of random endpoint pairs.
            max_walls (int): Largest dual distance between the endpoints.
            resolution (float): Oracle grid spacing.
            seed (int): Experiment seed.
            sampler (Optional[PointSampler]): Point source.
            oracle (Optional[DistanceOracle]): Distance oracle.
            metric (str): Metric of the fitted path length.

        Returns:
            QGReport: kappa, the worst length/distance ratio and one row
            per sample.
        """
        sampler = sampler or PointSampler(self.complex)
        oracle = oracle or DistanceOracle(self)
        chosen = get_metric(metric)

        def measure(job: Tuple[int, Any]) -> Dict[str, Any]:
            index, rng = job
            x, y = sampler.random_pair(rng, max_walls)
            path = self.special_path(x, y)
            length = float(self.path_length(path, chosen))
            distance = oracle.approx_distance(x, y, resolution)
            return {
                "sample": index,
                "x": repr(x),
                "y": repr(y),
                "walls": path.wall_count,
                "length_l1": float(self.path_length(path, L1Metric())),
                "length_l2": float(self.path_length(path)),
                "oracle": distance,
                "lower_bound": float(self.distance_lower_bound(x, y)),
                "ratio": length / distance if distance > 0 else 1.0,
                "kappa": length / (distance + 1.0),
            }

        rows = parallel_map(
            measure, enumerate(spawn_generators(seed, samples))
        )
        kappa = max([1.0] + [row["kappa"] for row in rows])
        worst = max([1.0] + [row["ratio"] for row in rows])
        logger.info(
            "Quasi-geodesic fit over %d samples: kappa %.4f", samples, kappa
        )
        return QGReport(kappa, samples, worst, chosen.name, rows)


def qg_fit(
    spec: FlipManifoldSpec,
    samples: int,
    max_walls: int,
    resolution: float,
    seed: int = 0,
) -> QGReport:
    """Build a model for spec and fit its quasi-geodesic constant."""
    return SpecialPathSystem(FlipComplex(spec)).qg_fit(
        samples, max_walls, resolution, seed
    )


def slide_defects(
    system: SpecialPathSystem, triples: Sequence[Tuple[PointCoord, ...]]
) -> List[Real]:
    """Horizontal-slide defects of (x, y, z) triples, in input order."""
    return parallel_map(
        lambda triple: system.horizontal_slide(*triple)[1], triples
    )

