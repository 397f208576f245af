"""
Unit tests for the metric model of the universal cover.
"""

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List
from unittest.mock import patch

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core.errors import InternalConsistencyError, NotOnWallError
from core.geometry.flip_complex import (
    CollarPoint,
    FlipComplex,
    PieceCopy,
    PointCoord,
    WallId,
)
from core.geometry.metrics import L1Metric
from core.geometry.point_sampler import PointSampler
from core.geometry.spec_loader import load_spec, load_spec_file
from core.geometry.spine_tree import TreePoint

A = ("a", 1)
DATA_DIR = Path(__file__).resolve().parent.parent / "data"
MODEL = FlipComplex(load_spec_file(str(DATA_DIR / "two_piece_wedge.json")))


@pytest.fixture
def offset_complex(raw_two_piece: Dict[str, Any]) -> FlipComplex:
    """Two-piece model whose gluing carries nonzero offsets."""
    raw_two_piece["gluings"][0]["offsets"] = ["1/2", "1/3"]
    return FlipComplex(load_spec(json.dumps(raw_two_piece)))


@pytest.fixture
def root_wall(two_piece_complex: FlipComplex) -> WallId:
    return two_piece_complex.wall(two_piece_complex.root, 0, ())


def test_root_and_neighbour_copies(
    two_piece_complex: FlipComplex, root_wall: WallId
) -> None:
    neighbor = two_piece_complex.neighbor_copy(root_wall)
    assert neighbor.piece == 1
    assert neighbor.depth == 1
    root = two_piece_complex.root
    assert two_piece_complex.dual_distance(root, neighbor) == 1
    assert two_piece_complex.dual_tree_geodesic(
        two_piece_complex.root, neighbor
    ) == [root_wall]
    back = WallId(neighbor, *two_piece_complex.entry_key(neighbor))
    assert two_piece_complex.neighbor_copy(back) == two_piece_complex.root
    assert two_piece_complex.same_wall(root_wall, back)


def test_flip_then_unflip_is_the_identity(
    offset_complex: FlipComplex,
) -> None:
    wall = offset_complex.wall(offset_complex.root, 0, ())
    coords = (Fraction(3, 4), Fraction(-2, 5))
    flipped = offset_complex.flip(wall, coords)
    assert flipped == (
        Fraction(-2, 5) + Fraction(1, 2),
        Fraction(3, 4) + Fraction(1, 3),
    )
    assert offset_complex.unflip(wall, flipped) == coords


def test_transfer_across_a_wall_and_back(offset_complex: FlipComplex) -> None:
    root = offset_complex.root
    wall = offset_complex.wall(root, 0, ())
    collar = offset_complex.collar(0)
    x = PointCoord(
        root, CollarPoint(0, wall.coset, Fraction(1, 4), collar), Fraction(2)
    )
    neighbor = offset_complex.neighbor_copy(wall)
    there = offset_complex.transfer(x, neighbor)
    assert there.copy == neighbor
    assert there.fiber == Fraction(1, 4) + Fraction(1, 3)
    assert offset_complex.transfer(there, root) == x
    assert offset_complex.copies_of(x) == [root, neighbor]
    assert offset_complex.canonical_point(there) == x


def test_transfer_off_the_wall_is_rejected(
    two_piece_complex: FlipComplex, root_wall: WallId
) -> None:
    x = PointCoord(two_piece_complex.root, TreePoint(()), 0)
    with pytest.raises(NotOnWallError):
        two_piece_complex.transfer(
            x, two_piece_complex.neighbor_copy(root_wall)
        )


def test_base_distance_along_one_collar(
    two_piece_complex: FlipComplex,
) -> None:
    p = CollarPoint(0, (), Fraction(0), Fraction(1, 16))
    q = CollarPoint(0, (), Fraction(1, 2), Fraction(1, 8))
    assert two_piece_complex.base_distance(0, p, q) == Fraction(9, 16)


def test_projection_from_an_axis_vertex_is_the_collar(
    two_piece_complex: FlipComplex, root_wall: WallId
) -> None:
    foot, dist = two_piece_complex.project_to_line(
        two_piece_complex.root, TreePoint(()), root_wall
    )
    assert dist == two_piece_complex.collar(0) == Fraction(1, 8)
    assert foot.height == two_piece_complex.collar(0)
    off_axis = TreePoint((("a", -1),))
    _, farther = two_piece_complex.project_to_line(
        two_piece_complex.root, off_axis, root_wall
    )
    assert farther == Fraction(1, 8) + Fraction(1, 4)


def test_product_distance_metrics(two_piece_complex: FlipComplex) -> None:
    root = two_piece_complex.root
    x = PointCoord(root, TreePoint(()), Fraction(0))
    y = PointCoord(root, TreePoint((A,)), Fraction(1, 3))
    l1 = two_piece_complex.product_distance(root, x, y, L1Metric())
    l2 = two_piece_complex.product_distance(root, x, y)
    assert l1 == Fraction(1, 4) + Fraction(1, 3)
    assert l2 == pytest.approx((1 / 16 + 1 / 9) ** 0.5)
    assert l2 <= l1


def test_segment_points_join_the_endpoints(
    two_piece_complex: FlipComplex,
) -> None:
    root = two_piece_complex.root
    x = PointCoord(root, TreePoint(()), Fraction(0))
    y = PointCoord(root, TreePoint((A, A)), Fraction(1))
    points = two_piece_complex.segment_points(root, x, y, 0.25)
    assert points[0] == x and points[-1] == y
    total = two_piece_complex.product_distance(root, x, y)
    steps = sum(
        two_piece_complex.product_distance(root, p, q)
        for p, q in zip(points, points[1:])
    )
    assert steps == pytest.approx(total)


def test_wall_separation_is_at_least_twice_the_collar(
    two_piece_complex: FlipComplex,
) -> None:
    details = two_piece_complex.rho_details(2)
    assert details.rho >= 2 * two_piece_complex.collar(0)
    assert details.walls[0] != details.walls[1]


def test_walls_of_are_sorted_and_distinct(
    two_piece_complex: FlipComplex,
) -> None:
    walls = two_piece_complex.walls_of(two_piece_complex.root, 2)
    assert len(walls) == len(set(walls)) > 1
    assert all(isinstance(wall.owner, PieceCopy) for wall in walls)


def test_bridge_realises_the_wall_separation(
    two_piece_complex: FlipComplex,
) -> None:
    details = two_piece_complex.rho_details(2)
    copy = PieceCopy((), details.piece)
    first, second = (WallId(copy, *key) for key in details.walls)
    p, q = two_piece_complex.line_to_line_bridge(copy, first, second)
    assert p.key == details.walls[0] and q.key == details.walls[1]
    assert p.height == q.height == two_piece_complex.collar(copy.piece)
    assert two_piece_complex.base_distance(copy, p, q) == details.rho
    assert two_piece_complex.estimate_rho(2) == details.rho


def test_wall_coords_from_either_side(offset_complex: FlipComplex) -> None:
    root = offset_complex.root
    wall = offset_complex.wall(root, 0, ())
    collar = offset_complex.collar(0)
    x = PointCoord(
        root, CollarPoint(0, wall.coset, Fraction(1, 4), collar), Fraction(2)
    )
    there = offset_complex.transfer(x, offset_complex.neighbor_copy(wall))
    assert offset_complex.wall_coords(wall, x) == (Fraction(1, 4), 2)
    assert offset_complex.wall_coords(wall, there) == (Fraction(1, 4), 2)
    with pytest.raises(NotOnWallError):
        offset_complex.wall_coords(
            wall, PointCoord(root, TreePoint(()), Fraction(0))
        )


def test_transfer_needs_a_collar_base(
    two_piece_complex: FlipComplex, root_wall: WallId
) -> None:
    x = PointCoord(two_piece_complex.root, TreePoint(()), Fraction(0))
    neighbor = two_piece_complex.neighbor_copy(root_wall)
    with patch.object(
        two_piece_complex, "on_wall_key", return_value=root_wall.key
    ):
        with pytest.raises(InternalConsistencyError):
            two_piece_complex.transfer(x, neighbor)


def random_copies(
    complex_: FlipComplex, seed: int, count: int
) -> List[PieceCopy]:
    """Copies reached by seeded walks of up to four walls from the root."""
    sampler = PointSampler(complex_)
    rng = np.random.default_rng(seed)
    return [
        sampler.walk(rng, complex_.root, int(rng.integers(0, 5)))
        for _ in range(count)
    ]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_dual_distance_is_a_tree_metric(seed: int) -> None:
    complex_ = MODEL
    x, y, z, w = random_copies(complex_, seed, 4)
    d = complex_.dual_distance
    assert d(x, x) == 0
    assert d(x, y) == d(y, x)
    assert d(x, z) <= d(x, y) + d(y, z)
    sums = sorted(
        [d(x, y) + d(z, w), d(x, z) + d(y, w), d(x, w) + d(y, z)]
    )
    assert sums[1] == sums[2]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_dual_tree_geodesic_is_reduced(seed: int) -> None:
    complex_ = MODEL
    a, b = random_copies(complex_, seed, 2)
    walls = complex_.dual_tree_geodesic(a, b)
    assert len(walls) == complex_.dual_distance(a, b)
    visited = [a]
    for wall in walls:
        assert wall.owner == visited[-1]
        visited.append(complex_.neighbor_copy(wall))
    assert visited[-1] == b
    assert len(set(visited)) == len(visited)
