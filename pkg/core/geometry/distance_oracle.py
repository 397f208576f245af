"""
Discretised distance oracle.

Approximates d(x, y) by the shortest path through grid points on the
walls between the copies of x and y. Each wall gets a coarse grid
centred on the special-path breakpoint, then successively halved
lattices around the current optimum down to a fixed floor, then a grid
at the requested resolution. All lattices are anchored at the
breakpoint and only the last depends on the resolution, so halving the
resolution only adds nodes. Consecutive walls are relaxed with a dense
min-plus step in numpy.
"""

# Standard library imports
import math
from typing import TYPE_CHECKING, List, Tuple

# Third-party imports
import numpy as np

# Local project imports
from core.errors import OracleBudgetError
from core.geometry.flip_complex import PointCoord, WallId
from core.geometry.metrics import L1Metric
from core.logger import logger

if TYPE_CHECKING:
    from core.geometry.special_paths import SpecialPath, SpecialPathSystem


class WallGrid:
    """Grid nodes of one wall in owner-side (arclength, fiber) coordinates."""

    def __init__(self, s: np.ndarray, t: np.ndarray) -> None:
        self.s = s
        self.t = t

    def __repr__(self) -> str:
        return f"WallGrid(nodes={self.s.size})"

    def __len__(self) -> int:
        return int(self.s.size)


class DistanceOracle:
    """
    Grid shortest paths between points of a FlipComplex.

    Attributes:
        paths (SpecialPathSystem): Supplies breakpoints and the model.
        window_factor (float): Coarse half-width per unit of L1 length.
        coarse_cells (int): Coarse grid cells per side.
        max_walls (int): Largest wall count accepted.
        max_nodes_per_wall (int): Largest fine grid accepted per wall.
        refine_floor (float): Spacing at which halving stops.
    """

    def __init__(
        self,
        paths: "SpecialPathSystem",
        window_factor: float = 4.0,
        coarse_cells: int = 16,
        max_walls: int = 12,
        max_nodes_per_wall: int = 2500,
        refine_floor: float = 1.0,
    ) -> None:
        self.paths = paths
        self.complex = paths.complex
        self.window_factor = window_factor
        self.coarse_cells = coarse_cells
        self.max_walls = max_walls
        self.max_nodes_per_wall = max_nodes_per_wall
        self.refine_floor = refine_floor

    def __repr__(self) -> str:
        return (
            f"DistanceOracle(window_factor={self.window_factor}, "
            f"coarse_cells={self.coarse_cells}, max_walls={self.max_walls})"
        )

    def approx_distance(
        self, x: PointCoord, y: PointCoord, resolution: float
    ) -> float:
        """
        Approximate d(x, y) in the L2 product metric.

        Args:
            x (PointCoord): First point.
            y (PointCoord): Second point.
            resolution (float): Fine grid spacing, > 0.

        Returns:
            float: Length of the best grid path; exact in one copy.

        Raises:
            OracleBudgetError: If too many walls or grid nodes are needed.
            ValueError: If resolution is not positive.
        """
        if resolution <= 0:
            raise ValueError(f"resolution must be positive, got {resolution}")
        shared = self.complex.shared_copy(x, y)
        if shared is not None:
            return float(self.complex.product_distance(shared, x, y))
        path = self.paths.special_path(x, y)
        if path.wall_count > self.max_walls:
            raise OracleBudgetError(
                f"{path.wall_count} walls exceed the budget of "
                f"{self.max_walls}"
            )
        centers = [
            tuple(float(v) for v in self.complex.wall_coords(wall, point))
            for wall, point in zip(path.walls, path.breakpoints[1:-1])
        ]
        estimate = float(self.paths.path_length(path, L1Metric()))
        half = self.window_factor * max(estimate, 1.0)
        spacing = 2.0 * half / self.coarse_cells
        grids = [
            self._lattice(center, center, half, spacing) for center in centers
        ]
        _, choice = self._relax(path, grids, track=True)
        while spacing > self.refine_floor:
            spacing /= 2.0
            grids = [
                self._merge(
                    grid,
                    self._lattice(
                        center,
                        (grid.s[index], grid.t[index]),
                        2.0 * spacing,
                        spacing,
                    ),
                )
                for center, grid, index in zip(centers, grids, choice)
            ]
            _, choice = self._relax(path, grids, track=True)
        final = []
        for center, grid, index in zip(centers, grids, choice):
            fine = self._lattice(
                center,
                (grid.s[index], grid.t[index]),
                2.0 * spacing,
                resolution,
            )
            if len(fine) > self.max_nodes_per_wall:
                raise OracleBudgetError(
                    f"{len(fine)} grid nodes on one wall exceed the budget "
                    f"of {self.max_nodes_per_wall}"
                )
            final.append(self._merge(grid, fine))
        best, _ = self._relax(path, final, track=False)
        logger.debug(
            "Oracle over %d walls at resolution %s: %.6f",
            path.wall_count,
            resolution,
            best,
        )
        return best

    @staticmethod
    def _lattice(
        anchor: Tuple[float, ...],
        middle: Tuple[float, float],
        half: float,
        step: float,
    ) -> WallGrid:
        """Points anchor + step * k within half of middle, per coordinate."""
        axes = []
        for origin, focus in zip(anchor, middle):
            low = math.ceil((focus - half - origin) / step - 1e-9)
            high = math.floor((focus + half - origin) / step + 1e-9)
            axes.append(origin + step * np.arange(low, high + 1))
        s, t = np.meshgrid(axes[0], axes[1])
        return WallGrid(s.ravel(), t.ravel())

    @staticmethod
    def _merge(first: WallGrid, second: WallGrid) -> WallGrid:
        return WallGrid(
            np.concatenate([first.s, second.s]),
            np.concatenate([first.t, second.t]),
        )

    def _entry_costs(
        self, path: "SpecialPath", grid: WallGrid, wall: WallId, end: bool
    ) -> np.ndarray:
        """Distances from x (or to y) to the nodes of the first/last wall."""
        complex_ = self.complex
        copy = path.copies[-1] if end else path.copies[0]
        point = path.breakpoints[-1] if end else path.breakpoints[0]
        local = complex_.transfer(point, copy)
        foot, offset = complex_.project_to_line(copy, local.base, wall)
        s, t = grid.s, grid.t
        if end:
            a, b = (float(v) for v in complex_.flip(wall, (0, 0)))
            s, t = t + a, s + b
        base = float(offset) + np.abs(s - float(foot.sigma))
        return np.hypot(base, t - float(local.fiber))

    def _step_costs(
        self,
        path: "SpecialPath",
        index: int,
        before: WallGrid,
        after: WallGrid,
    ) -> np.ndarray:
        """Pairwise distances in copy index between walls index-1 and index."""
        complex_ = self.complex
        copy = path.copies[index]
        incoming, outgoing = path.walls[index - 1], path.walls[index]
        a, b = (float(v) for v in complex_.flip(incoming, (0, 0)))
        s_in, t_in = before.t + a, before.s + b
        pair = complex_.line_pair(
            copy.piece,
            complex_.wall_key_in(incoming, copy),
            outgoing.key,
        )
        gap = pair.tree_distance_grid(s_in[:, None], after.s[None, :])
        base = 2.0 * float(complex_.collar(copy.piece)) + gap
        return np.hypot(base, after.t[None, :] - t_in[:, None])

    def _relax(
        self, path: "SpecialPath", grids: List[WallGrid], track: bool
    ) -> Tuple[float, List[int]]:
        cost = self._entry_costs(path, grids[0], path.walls[0], end=False)
        parents: List[np.ndarray] = []
        for index in range(1, len(grids)):
            total = cost[:, None] + self._step_costs(
                path, index, grids[index - 1], grids[index]
            )
            if track:
                parents.append(np.argmin(total, axis=0))
            cost = total.min(axis=0)
        final = cost + self._entry_costs(
            path, grids[-1], path.walls[-1], end=True
        )
        best = int(np.argmin(final))
        choice = [best]
        for parent in reversed(parents):
            choice.append(int(parent[choice[-1]]))
        choice.reverse()
        return float(final[best]), choice if track else []
