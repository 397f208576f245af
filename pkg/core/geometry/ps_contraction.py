"""
Path-system contraction tests.

A SubsetModel is a finite sample of a subset A of the model: a connected
set of copies and, in each, the sampled points of A (its slice). The
projection sends x to a point of the slice of the subtree copy nearest
to x's copy. The analyzer checks the contraction property on sampled
pairs, the ball-projection dichotomy, and the neighbourhood bound for
certified quasi-geodesics with endpoints on A.
"""

# Standard library imports
import math
import threading
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

# Third-party imports
import networkx as nx
import numpy as np

# Local project imports
from core.algebra.graph_of_groups import GraphOfGroups, GroupWord
from core.errors import (
    InternalConsistencyError,
    NoCertifiedPathError,
    NotMorseError,
    OracleBudgetError,
)
from core.geometry.distance_oracle import DistanceOracle
from core.geometry.flip_complex import (
    CollarPoint,
    ModelConstants,
    PieceCopy,
    PointCoord,
    WallId,
)
from core.geometry.point_sampler import PointSampler
from core.geometry.special_paths import SpecialPathSystem
from core.geometry.spine_tree import TreePoint
from core.logger import logger
from core.sampling import choose, parallel_map, spawn_generators

PROJECTION_MODES = ("slice_center", "nearest")


def copy_order(copy: PieceCopy) -> Tuple[int, str]:
    """Deterministic sort key for copies."""
    return copy.depth, repr(copy.address)


@dataclass(frozen=True)
class Slice:
    """Sampled points of A in one copy, their 1-center and radius."""

    center: PointCoord
    radius: float
    diameter: float
    points: Tuple[PointCoord, ...]

    def __repr__(self) -> str:
        return (
            f"Slice(points={len(self.points)}, radius={self.radius:.4f}, "
            f"diameter={self.diameter:.4f})"
        )


@dataclass
class SubsetModel:
    """
    Finite model of a subset of the universal cover.

    Attributes:
        subtree: Copies meeting A; connected in the dual tree.
        slices: Per copy, the sampled points of A.
        wall_discs: Per wall inside the subtree, a center and a radius.
        delta: Largest slice diameter.
        epsilon: Largest overlap of two boundary axes used in the subtree.
        mode: Projection mode, "slice_center" or "nearest".
        fixed_pairs: Point pairs always checked before random samples.
        label: Name used in reports.
        orbit: For an orbit path, the orbit points g^i b by exponent.
        steps: For an orbit path, the largest exponent joined.
    """

    subtree: Tuple[PieceCopy, ...]
    slices: Dict[PieceCopy, Slice]
    wall_discs: Dict[WallId, Tuple[PointCoord, float]] = field(
        default_factory=dict
    )
    delta: float = 0.0
    epsilon: float = 0.0
    mode: str = "slice_center"
    fixed_pairs: List[Tuple[PointCoord, PointCoord]] = field(
        default_factory=list
    )
    label: str = "subset"
    orbit: Dict[int, PointCoord] = field(default_factory=dict)
    steps: int = 0

    def __repr__(self) -> str:
        return (
            f"SubsetModel({self.label}, copies={len(self.subtree)}, "
            f"delta={self.delta:.4f}, mode={self.mode})"
        )


@dataclass(frozen=True)
class ContractionParams:
    """Contraction constant C, projection constant k, path constant cbar."""

    C: float
    k: float
    cbar: float
    R: float

    def __post_init__(self) -> None:
        if min(self.C, self.k, self.cbar) <= 0 or self.cbar < 1:
            raise ValueError(f"invalid contraction parameters {self!r}")
        expected = self.cbar**2 * (1 + 2 * self.C)
        if not math.isclose(self.R, expected, rel_tol=1e-12):
            raise ValueError(f"R must equal cbar^2 (1 + 2C) = {expected}")

    @classmethod
    def build(
        cls, C: float, k: float, lam: float = 1.0
    ) -> "ContractionParams":
        """Parameters with cbar = max(k, lam, 1) and the derived R."""
        cbar = max(k, lam, 1.0)
        return cls(C, k, cbar, cbar**2 * (1 + 2 * C))


@dataclass
class ContractionReport:
    """Outcome of a contraction test."""

    passed: bool
    samples: int
    measured_c: float
    checked_pairs: int
    vacuous: bool = False
    witness: Optional[Dict[str, Any]] = None

    def __repr__(self) -> str:
        return (
            f"ContractionReport(passed={self.passed}, samples={self.samples}, "
            f"measured_c={self.measured_c:.4f}, vacuous={self.vacuous})"
        )


@dataclass
class BallProjectionReport:
    """Outcome of the ball-projection dichotomy check."""

    passed: bool
    samples: int
    skipped: int
    least_k: float
    tested: int = 0
    witness: Optional[Dict[str, Any]] = None

    def __repr__(self) -> str:
        return (
            f"BallProjectionReport(passed={self.passed}, "
            f"least_k={self.least_k:.4f}, tested={self.tested}, "
            f"skipped={self.skipped})"
        )


@dataclass
class QuasiconvexityReport:
    """Largest distance from certified quasi-geodesics to A, and the bound."""

    measured: float
    bound: float
    certified: int
    discarded: int
    witness: Optional[Dict[str, Any]] = None

    def __repr__(self) -> str:
        return (
            f"QuasiconvexityReport(measured={self.measured:.4f}, "
            f"bound={self.bound:.4f}, certified={self.certified})"
        )

    @property
    def passed(self) -> bool:
        """True if every certified path stayed within the bound."""
        return self.measured <= self.bound


class ContractionAnalyzer:
    """
    Build subsets of the model and test their contraction properties.

    Attributes:
        paths (SpecialPathSystem): Special paths on the model.
        oracle (DistanceOracle): Cross-copy distances.
        sampler (PointSampler): Random points.
        resolution (float): Oracle grid spacing.
        spacing (float): Sampling step along paths.
    """

    def __init__(
        self,
        paths: SpecialPathSystem,
        oracle: Optional[DistanceOracle] = None,
        sampler: Optional[PointSampler] = None,
        resolution: float = 0.25,
        spacing: float = 0.25,
    ) -> None:
        self.paths = paths
        self.complex = paths.complex
        self.oracle = oracle or DistanceOracle(paths)
        self.sampler = sampler or PointSampler(self.complex)
        self.resolution = resolution
        self.spacing = spacing
        self._distances: Dict[Tuple[PointCoord, PointCoord], float] = {}
        # Lock to prevent race conditions
        self._cache_lock = threading.Lock()

    def __repr__(self) -> str:
        return (
            f"ContractionAnalyzer(resolution={self.resolution}, "
            f"spacing={self.spacing})"
        )

    # ------------------------------------------------------------------
    # Distances
    # ------------------------------------------------------------------

    def distance(self, a: PointCoord, b: PointCoord) -> float:
        """Exact L2 distance in a shared copy, the oracle otherwise."""
        shared = self.complex.shared_copy(a, b)
        if shared is not None:
            return float(self.complex.product_distance(shared, a, b))
        key = (a, b)
        with self._cache_lock:
            cached = self._distances.get(key)
        if cached is not None:
            return cached
        try:
            value = self.oracle.approx_distance(a, b, self.resolution)
        except OracleBudgetError:
            value = float(self.paths.distance_lower_bound(a, b))
            logger.debug("Oracle budget exceeded, using the lower bound")
        with self._cache_lock:
            self._distances[key] = value
            self._distances[(b, a)] = value
        return value

    def _in_copy_distance(
        self, copy: PieceCopy, a: PointCoord, points: Sequence[PointCoord]
    ) -> float:
        return min(
            float(self.complex.product_distance(copy, a, point))
            for point in points
        )

    # ------------------------------------------------------------------
    # Subsets
    # ------------------------------------------------------------------

    def _build_slice(self, copy: PieceCopy, points: List[PointCoord]) -> Slice:
        unique = list(dict.fromkeys(points))
        matrix = np.array(
            [
                [
                    float(self.complex.product_distance(copy, a, b))
                    for b in unique
                ]
                for a in unique
            ]
        )
        eccentricity = matrix.max(axis=1)
        best = int(np.argmin(eccentricity))
        return Slice(
            unique[best],
            float(eccentricity[best]),
            float(matrix.max()),
            tuple(unique),
        )

    def _assemble(
        self,
        grouped: Dict[PieceCopy, List[PointCoord]],
        label: str,
        mode: str = "slice_center",
    ) -> SubsetModel:
        subtree = tuple(sorted(grouped, key=copy_order))
        graph = nx.Graph()
        graph.add_nodes_from(subtree)
        members = set(subtree)
        for copy in subtree:
            if copy.address:
                parent = self.complex.copy_at(copy.address[:-1])
                if parent in members:
                    graph.add_edge(parent, copy)
        if not nx.is_connected(graph):
            raise InternalConsistencyError(f"{label}: subtree is disconnected")
        slices = {
            copy: self._build_slice(copy, grouped[copy]) for copy in subtree
        }
        discs: Dict[WallId, Tuple[PointCoord, float]] = {}
        epsilon = 0.0
        for parent, child in graph.edges():
            if parent.depth > child.depth:
                parent, child = child, parent
            last = child.address[-1]
            wall = WallId(parent, last.cycle, last.coset)
            on_wall = [
                point
                for point in slices[parent].points
                if self.complex.on_wall_key(point) == wall.key
            ]
            if on_wall:
                discs[wall] = (
                    on_wall[0],
                    max(
                        self._in_copy_distance(parent, on_wall[0], [p])
                        for p in on_wall
                    ),
                )
        for copy in subtree:
            keys = sorted(
                {
                    self.complex.wall_key_in(wall, copy)
                    for wall in discs
                    if copy in (wall.owner, self.complex.neighbor_copy(wall))
                },
                key=repr,
            )
            for index, first in enumerate(keys):
                for second in keys[index + 1 :]:
                    pair = self.complex.line_pair(copy.piece, first, second)
                    epsilon = max(epsilon, float(pair.a_high - pair.a_low))
        delta = max(piece.diameter for piece in slices.values())
        return SubsetModel(
            subtree, slices, discs, max(delta, 1e-12), epsilon, mode, [], label
        )

    def _group(
        self, points: Sequence[PointCoord]
    ) -> Dict[PieceCopy, List[PointCoord]]:
        grouped: Dict[PieceCopy, List[PointCoord]] = {}
        for point in points:
            for copy in self.complex.copies_of(point):
                grouped.setdefault(copy, []).append(
                    self.complex.transfer(point, copy)
                )
        return grouped

    def subset_from_morse(
        self, word: GroupWord, basepoint: PointCoord, steps: int
    ) -> SubsetModel:
        """
        Sample the orbit path of a Morse element.

        Args:
            word (GroupWord): The element g.
            basepoint (PointCoord): Orbit basepoint.
            steps (int): Special paths from g^i b to g^(i+1) b are joined
                for -steps <= i <= steps.

        Returns:
            SubsetModel: Slices of the sampled axis.

        Raises:
            NotMorseError: If g is conjugate into a vertex group.
        """
        group = GraphOfGroups(self.complex)
        if word.is_identity or not group.is_morse(word):
            raise NotMorseError(
                "element is conjugate into a vertex group", witness=word
            )
        inverse = word.inverse()
        orbit = {0: basepoint}
        for index in range(1, steps + 2):
            orbit[index] = group.act_on_point(word, orbit[index - 1])
        for index in range(-1, -steps - 1, -1):
            orbit[index] = group.act_on_point(inverse, orbit[index + 1])
        points: List[PointCoord] = []
        for index in range(-steps, steps + 1):
            path = self.paths.special_path(orbit[index], orbit[index + 1])
            points.extend(self.paths.segment_points(path, self.spacing))
        model = self._assemble(self._group(points), "morse_axis")
        model.orbit = orbit
        model.steps = steps
        logger.info(
            "Morse subset: %d copies, delta %.4f",
            len(model.subtree),
            model.delta,
        )
        return model

    def morse_axis(
        self,
        word: GroupWord,
        basepoint: PointCoord,
        steps: int,
        C: Optional[float] = None,
        max_steps: int = 64,
    ) -> Tuple[SubsetModel, float]:
        """
        Orbit path long enough for its ends to project C apart.

        The number of joined steps starts at steps and doubles until the
        projections of g^-s b and g^s b are at least C apart by the
        special-path lower bound. C defaults to the contraction constant
        of each candidate subset. The end pair joins the subset's fixed pairs.

        Returns:
            Tuple[SubsetModel, float]: The subset and its constant C.

        Raises:
            NotMorseError: If g is conjugate into a vertex group.
        """
        current = max(1, steps)
        while True:
            subset = self.subset_from_morse(word, basepoint, current)
            constant = C or self.contraction_constant(subset)
            ends = (subset.orbit[-current], subset.orbit[current])
            reach = float(
                self.paths.distance_lower_bound(
                    self.ps_projection(ends[0], subset),
                    self.ps_projection(ends[1], subset),
                )
            )
            if reach >= constant or current >= max_steps:
                break
            current = min(2 * current, max_steps)
        if reach < constant:
            logger.warning(
                "Axis ends project %.4f apart after %d steps, below C=%.4f",
                reach,
                current,
                constant,
            )
        subset.fixed_pairs.append(ends)
        logger.info("Morse axis: %d steps, C=%.4f", current, constant)
        return subset, constant

    def wall_plane_subset(
        self,
        wall: WallId,
        half_size: float,
        spacing: float,
        offset: Optional[float] = None,
    ) -> SubsetModel:
        """
        Square of a wall plane, with far fixed pairs.

        The plane is sampled on the owner's chart at the given spacing in
        [-half_size, half_size]^2. Each fixed pair shares a base point
        offset off the wall's axis and sits at fibers -half_size
        and +half_size.
        """
        owner = wall.owner
        cycle, coset = wall.key
        collar = self.complex.collar(owner.piece)
        ticks = np.arange(-half_size, half_size + spacing / 2, spacing)
        points = [
            PointCoord(
                owner, CollarPoint(cycle, coset, float(s), collar), float(t)
            )
            for s in ticks
            for t in ticks
        ]
        model = self._assemble({owner: points}, "wall_plane", mode="nearest")
        distance = offset or 2.0 * half_size
        base = self._off_axis_point(owner.piece, wall.key, distance)
        model.fixed_pairs = [
            (
                PointCoord(owner, base, -half_size),
                PointCoord(owner, base, half_size),
            )
        ]
        return model

    def _off_axis_point(
        self, piece: int, key: Tuple[int, Any], distance: float
    ) -> TreePoint:
        axis = self.complex.axis(piece, key)
        tree = self.complex.trees[piece]
        vertex = axis.vertex_at(0)
        banned = {axis.step_at(0), (axis.step_at(-1)[0], -axis.step_at(-1)[1])}
        steps = max(1, math.ceil(distance / float(tree.scale)))
        for index in range(steps):
            options = [
                letter
                for letter in tree.children(vertex)
                if index or letter not in banned
            ]
            if not options:
                raise InternalConsistencyError(
                    "spine has no branch off the axis"
                )
            vertex = vertex + (options[0],)
        return TreePoint(vertex)

    # ------------------------------------------------------------------
    # Projection and tests
    # ------------------------------------------------------------------

    def nearest_subtree_copy(
        self, x: PointCoord, subset: SubsetModel
    ) -> Tuple[PieceCopy, PieceCopy]:
        """x's copy and the subtree copy nearest to it."""
        options = [
            (
                self.complex.dual_distance(mine, other),
                copy_order(mine),
                mine,
                other,
            )
            for mine in self.complex.copies_of(x)
            for other in subset.subtree
        ]
        _, _, mine, other = min(options, key=lambda item: item[:2])
        return mine, other

    def ps_projection(self, x: PointCoord, subset: SubsetModel) -> PointCoord:
        """
        Projection of x to the subset.

        The slice center of the nearest subtree copy; in "nearest" mode
        the closest slice point when x lies in a subtree copy.
        """
        mine, target = self.nearest_subtree_copy(x, subset)
        piece = subset.slices[target]
        if subset.mode == "nearest" and mine == target:
            local = self.complex.transfer(x, mine)
            return min(
                piece.points,
                key=lambda p: float(
                    self.complex.product_distance(mine, local, p)
                ),
            )
        return piece.center

    def _near_point(
        self, rng: np.random.Generator, subset: SubsetModel
    ) -> PointCoord:
        start = choose(rng, list(subset.subtree))
        copy = self.sampler.walk(rng, start, int(rng.integers(0, 3)))
        return self.sampler.random_point(rng, copy)

    def _orbit_point(
        self, rng: np.random.Generator, subset: SubsetModel, index: int
    ) -> PointCoord:
        start = choose(rng, self.complex.copies_of(subset.orbit[index]))
        copy = self.sampler.walk(rng, start, int(rng.integers(0, 2)))
        return self.sampler.random_point(rng, copy)

    def _far_apart(self, a: PointCoord, b: PointCoord, C: float) -> bool:
        """True if d(a, b) >= C; bounds decide before the oracle does."""
        if self.complex.shared_copy(a, b) is None:
            if float(self.paths.distance_lower_bound(a, b)) >= C:
                return True
            path = self.paths.special_path(a, b)
            if float(self.paths.path_length(path)) < C:
                return False
        return self.distance(a, b) >= C

    def _distance_to_path(
        self, point: PointCoord, path_points: Sequence[PointCoord]
    ) -> float:
        local = [
            candidate
            for candidate in path_points
            if self.complex.shared_copy(point, candidate) is not None
        ]
        if local:
            return min(self.distance(point, candidate) for candidate in local)
        return min(self.distance(point, other) for other in path_points)

    def _check_pair(
        self, subset: SubsetModel, C: float, x: PointCoord, y: PointCoord
    ) -> Tuple[bool, float, Optional[Dict[str, Any]]]:
        px, py = self.ps_projection(x, subset), self.ps_projection(y, subset)
        if not self._far_apart(px, py, C):
            return False, 0.0, None
        path = self.paths.special_path(x, y)
        points = self.paths.segment_points(path, self.spacing)
        gap = max(
            self._distance_to_path(px, points),
            self._distance_to_path(py, points),
        )
        witness = None
        if gap > C:
            witness = {
                "condition": "far projections avoided by the path",
                "x": repr(x),
                "y": repr(y),
                "distance": gap,
            }
        return True, gap, witness

    def check_contracting(
        self, subset: SubsetModel, C: float, samples: int, seed: int = 0
    ) -> ContractionReport:
        """
        Test the contraction property on sampled points and pairs.

        On an orbit path, x is drawn near g^-i b and y near g^j b with
        1 <= i, j <= steps, so that long pairs are sampled; otherwise
        both are drawn near random subtree copies. Pairs whose
        projections are less than C apart are not checked.

        Args:
            subset (SubsetModel): The subset A.
            C (float): Contraction constant.
            samples (int): Random pairs beyond the subset's fixed pairs.
            seed (int): Sampling seed.

        Returns:
            ContractionReport: The first violation is kept as witness.
        """
        measured = 0.0
        for copy in subset.subtree:
            piece = subset.slices[copy]
            for point in piece.points:
                gap = self.distance(point, self.ps_projection(point, subset))
                measured = max(measured, gap)
                if gap > C:
                    return ContractionReport(
                        False,
                        samples,
                        measured,
                        0,
                        witness={
                            "condition": "point of A far from its projection",
                            "x": repr(point),
                            "distance": gap,
                        },
                    )

        def draw(rng: np.random.Generator) -> Tuple[PointCoord, PointCoord]:
            if subset.orbit and subset.steps:
                i, j = (int(v) for v in rng.integers(1, subset.steps + 1, 2))
                return (
                    self._orbit_point(rng, subset, -i),
                    self._orbit_point(rng, subset, j),
                )
            return self._near_point(rng, subset), self._near_point(rng, subset)

        pairs = list(subset.fixed_pairs) + parallel_map(
            draw, spawn_generators(seed, samples)
        )
        results = parallel_map(
            lambda pair: self._check_pair(subset, C, *pair), pairs
        )
        checked = 0
        for relevant, gap, witness in results:
            checked += int(relevant)
            measured = max(measured, gap)
            if witness is not None:
                logger.info("Contraction violated at C=%.4f", C)
                return ContractionReport(
                    False, samples, measured, checked, False, witness
                )
        return ContractionReport(
            True, samples, measured, checked, vacuous=checked == 0
        )

    def distance_to_subset(self, x: PointCoord, subset: SubsetModel) -> float:
        """Distance from x to the slice of its nearest subtree copy."""
        _, target = self.nearest_subtree_copy(x, subset)
        return min(
            self.distance(x, point) for point in subset.slices[target].points
        )

    def _perturb(
        self, rng: np.random.Generator, x: PointCoord, radius: float
    ) -> PointCoord:
        copy = self.complex.copies_of(x)[0]
        local = self.complex.transfer(x, copy)
        target = self.sampler.random_base(rng, copy)
        base_gap = float(self.complex.base_distance(copy, local.base, target))
        share = float(rng.random()) * radius
        step = min(share, base_gap)
        base = self.complex.base_point_along(
            copy.piece, local.base, target, step
        )
        lift = math.sqrt(max(radius**2 - step**2, 0.0)) * float(
            rng.uniform(-1.0, 1.0)
        )
        return PointCoord(copy, base, float(local.fiber) + lift)

    def _far_point(
        self,
        rng: np.random.Generator,
        subset: SubsetModel,
        anchors: Sequence[Tuple[PieceCopy, PointCoord]],
        k: float,
    ) -> PointCoord:
        copy, anchor = choose(rng, anchors)
        fibers = [float(point.fiber) for point in subset.slices[copy].points]
        lift = float(rng.uniform(k * (k + 1), k * (k + 3)))
        if rng.random() < 0.5:
            return PointCoord(copy, anchor.base, max(fibers) + lift)
        return PointCoord(copy, anchor.base, min(fibers) - lift)

    def ball_projection_check(
        self,
        subset: SubsetModel,
        params: ContractionParams,
        samples: int,
        seed: int = 0,
        ball_points: int = 8,
    ) -> BallProjectionReport:
        """
        Check d(x, pi(x)) <= k d(x, A) + k and diam pi(B_r(x)) <= C.

        Points near the subtree give the least k0 >= 1 allowed by the
        first condition. The ball condition is then tried for k0, 2 k0,
        ... up to params.k: each sample sits off an interior slice point
        by a fiber lift in [k (k + 1), k (k + 3)], so the ball radius
        r = d(x, A) / k - k is at least 1, and B_r(x) is sampled inside
        x's copy. least_k is the first k whose balls all pass; samples
        with r <= 0 are counted as skipped.

        Args:
            subset (SubsetModel): The subset A.
            params (ContractionParams): C and the largest k tried.
            samples (int): Points per condition and per k.
            seed (int): Sampling seed.
            ball_points (int): Points sampled in each ball.

        Returns:
            BallProjectionReport: The first violation is kept as witness.
        """
        generators = spawn_generators(seed, 2 * samples)
        near, far = generators[:samples], generators[samples:]

        def inspect_near(
            rng: np.random.Generator,
        ) -> Tuple[float, Dict[str, Any]]:
            x = self._near_point(rng, subset)
            to_subset = self.distance_to_subset(x, subset)
            to_projection = self.distance(x, self.ps_projection(x, subset))
            return to_projection / (to_subset + 1.0), {
                "condition": "projection farther than k d(x, A) + k",
                "x": repr(x),
                "distance": to_projection,
            }

        ratios = parallel_map(inspect_near, near)
        least_k = max([1.0] + [ratio for ratio, _ in ratios])
        if least_k > params.k:
            _, witness = max(
                ratios or [(1.0, {"condition": "k below 1"})],
                key=lambda item: item[0],
            )
            return BallProjectionReport(
                False, samples, 0, least_k, witness=witness
            )
        anchors = [
            (copy, point)
            for copy in subset.subtree
            for point in subset.slices[copy].points
            if self.complex.on_wall_key(point) is None
        ]
        if not anchors:
            logger.warning("Subset has no interior points, balls skipped")
            return BallProjectionReport(True, samples, samples, least_k)

        def inspect_far(
            rng: np.random.Generator, k: float
        ) -> Tuple[bool, Optional[Dict[str, Any]]]:
            x = self._far_point(rng, subset, anchors, k)
            radius = self.distance_to_subset(x, subset) / k - k
            if radius <= 0:
                return False, None
            images = [
                self.ps_projection(self._perturb(rng, x, radius), subset)
                for _ in range(ball_points)
            ]
            spread = max(
                self.distance(a, b) for a in images for b in images
            )
            if spread > params.C:
                return True, {
                    "condition": "ball projects to a large set",
                    "x": repr(x),
                    "k": k,
                    "radius": radius,
                    "distance": spread,
                }
            return True, None

        k = least_k
        while True:
            results = parallel_map(lambda rng, k=k: inspect_far(rng, k), far)
            tested = sum(1 for checked, _ in results if checked)
            witness = next(
                (found for _, found in results if found is not None), None
            )
            if witness is None:
                return BallProjectionReport(
                    True, samples, samples - tested, k, tested
                )
            if k >= params.k:
                logger.info("Ball condition fails up to k=%.4f", k)
                return BallProjectionReport(
                    False, samples, samples - tested, k, tested, witness
                )
            k = min(2 * k, params.k)

    def _detour_points(
        self,
        rng: np.random.Generator,
        a: PointCoord,
        b: PointCoord,
        magnitude: float,
    ) -> List[PointCoord]:
        path = self.paths.special_path(a, b)
        points = [path.breakpoints[0]]
        for wall, point in zip(path.walls, path.breakpoints[1:-1]):
            s, t = self.complex.wall_coords(wall, point)
            if magnitude > 0:
                s = float(s) + float(rng.uniform(-magnitude, magnitude))
                t = float(t) + float(rng.uniform(-magnitude, magnitude))
            cycle, coset = wall.key
            collar = self.complex.collar(wall.owner.piece)
            points.append(
                self.complex.canonical_point(
                    PointCoord(
                        wall.owner,
                        CollarPoint(cycle, coset, s, collar),
                        t,
                    )
                )
            )
        points.append(path.breakpoints[-1])
        return points

    def _certify(self, points: Sequence[PointCoord], lam: float) -> bool:
        lengths = [0.0]
        for first, second in zip(points, points[1:]):
            lengths.append(lengths[-1] + self.distance(first, second))
        for i in range(len(points)):
            for j in range(i + 1, len(points)):
                length = lengths[j] - lengths[i]
                low = float(
                    self.paths.distance_lower_bound(points[i], points[j])
                )
                if length <= lam * low + lam:
                    continue
                path = self.paths.special_path(points[i], points[j])
                low = self.distance(points[i], points[j]) - (
                    self.resolution * path.wall_count
                )
                if length > lam * low + lam:
                    return False
        return True

    def quasiconvexity_radius(
        self,
        subset: SubsetModel,
        lam: float,
        params: ContractionParams,
        samples: int,
        seed: int = 0,
    ) -> QuasiconvexityReport:
        """
        Largest distance to A along certified (lam, lam)-quasi-geodesics.

        Candidates are special paths between points of A whose wall
        points are moved by at most lam * delta in each coordinate;
        candidates failing certification at breakpoints are discarded.

        Raises:
            NoCertifiedPathError: If no candidate is certified.
        """
        cbar = max(params.k, lam)
        R = cbar**2 * (1 + 2 * params.C)
        bound = 4 * cbar**2 * (R + 2)
        anchors = [
            point
            for copy in subset.subtree
            for point in subset.slices[copy].points
        ]
        magnitude = 0.0 if lam <= 1 else lam * subset.delta

        def candidate(
            rng: np.random.Generator,
        ) -> Optional[Tuple[float, Dict[str, Any]]]:
            a, b = choose(rng, anchors), choose(rng, anchors)
            points = self._detour_points(rng, a, b, magnitude)
            if not self._certify(points, lam):
                return None
            worst, where = 0.0, a
            for first, second in zip(points, points[1:]):
                copy = self.complex.shared_copy(first, second)
                if copy is None:
                    raise InternalConsistencyError("detour left its copy")
                for point in self.complex.segment_points(
                    copy, first, second, self.spacing
                ):
                    gap = self.distance_to_subset(point, subset)
                    if gap > worst:
                        worst, where = gap, point
            return worst, {"x": repr(a), "y": repr(b), "farthest": repr(where)}

        results = parallel_map(candidate, spawn_generators(seed, samples))
        certified = [result for result in results if result is not None]
        discarded = len(results) - len(certified)
        if discarded:
            logger.warning("%d candidate paths were not certified", discarded)
        if not certified:
            raise NoCertifiedPathError(
                f"none of {samples} candidate paths could be certified"
            )
        measured, witness = max(certified, key=lambda item: item[0])
        return QuasiconvexityReport(
            measured, bound, len(certified), discarded, witness
        )

    def contraction_constant(self, subset: SubsetModel) -> float:
        """C = 10 delta + R2 with R2 = 5 (delta + epsilon) + 5 delta."""
        r2 = 5 * (subset.delta + subset.epsilon) + 5 * subset.delta
        return 10 * subset.delta + r2

    def model_constants(self, subset: SubsetModel) -> ModelConstants:
        """Wall separation and slice diameter for reports."""
        estimate = self.complex.rho_details(self.paths.rho_radius)
        return ModelConstants(estimate.rho, subset.delta, estimate.radius)
