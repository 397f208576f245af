"""
Unit tests for special paths and the discretised distance oracle.
"""

from fractions import Fraction
from itertools import combinations
from typing import Tuple
from unittest.mock import patch

import numpy as np
import pytest

from core.errors import (
    InternalConsistencyError,
    NotOnWallError,
    OracleBudgetError,
)
from core.geometry.distance_oracle import DistanceOracle
from core.geometry.flip_complex import CollarPoint, FlipComplex, PointCoord
from core.geometry.metrics import L1Metric
from core.geometry.point_sampler import PointSampler
from core.geometry.special_paths import SpecialPathSystem, slide_defects
from core.geometry.spine_tree import TreePoint

A, B = ("a", 1), ("b", 1)


@pytest.fixture
def across(
    two_piece_complex: FlipComplex,
) -> Tuple[PointCoord, PointCoord]:
    """A root-copy point and a point one wall away."""
    root = two_piece_complex.root
    neighbor = two_piece_complex.neighbor_copy(
        two_piece_complex.wall(root, 0, ())
    )
    x = PointCoord(root, TreePoint((A,)), Fraction(1, 2))
    y = PointCoord(neighbor, TreePoint((B,)), Fraction(-1, 4))
    return x, y


def test_same_copy_path_is_one_segment(
    two_piece_paths: SpecialPathSystem,
) -> None:
    root = two_piece_paths.complex.root
    x = PointCoord(root, TreePoint(()), Fraction(0))
    y = PointCoord(root, TreePoint((A, B)), Fraction(1))
    path = two_piece_paths.special_path(x, y)
    assert path.wall_count == 0
    assert len(path.breakpoints) == 2
    assert two_piece_paths.path_length(path) == pytest.approx(
        float(two_piece_paths.complex.product_distance(root, x, y))
    )


def test_path_across_one_wall(
    two_piece_paths: SpecialPathSystem,
    across: Tuple[PointCoord, PointCoord],
) -> None:
    x, y = across
    path = two_piece_paths.special_path(x, y)
    assert path.wall_count == 1
    assert len(path.breakpoints) == 3
    assert len(path.copies) == 2
    middle = path.breakpoints[1]
    assert two_piece_paths.complex.on_wall_key(middle) is not None


def test_reversed_path_has_the_same_length(
    two_piece_paths: SpecialPathSystem,
    across: Tuple[PointCoord, PointCoord],
) -> None:
    x, y = across
    forward = two_piece_paths.special_path(x, y)
    backward = two_piece_paths.special_path(y, x)
    assert two_piece_paths.path_length(forward) == pytest.approx(
        two_piece_paths.path_length(backward)
    )
    assert two_piece_paths.path_length(forward, L1Metric()) == (
        two_piece_paths.path_length(backward, L1Metric())
    )


def test_lower_bound_does_not_exceed_the_path(
    two_piece_paths: SpecialPathSystem,
    across: Tuple[PointCoord, PointCoord],
) -> None:
    x, y = across
    path = two_piece_paths.special_path(x, y)
    lower = float(two_piece_paths.distance_lower_bound(x, y))
    assert 0 < lower <= float(two_piece_paths.path_length(path)) + 1e-9


def test_segment_points_follow_every_segment(
    two_piece_paths: SpecialPathSystem,
    across: Tuple[PointCoord, PointCoord],
) -> None:
    x, y = across
    path = two_piece_paths.special_path(x, y)
    points = two_piece_paths.segment_points(path, 0.25)
    assert points[0] == path.breakpoints[0]
    assert points[-1] == path.breakpoints[-1]
    assert path.breakpoints[1] in points


def test_horizontal_slide_does_not_lengthen(
    two_piece_paths: SpecialPathSystem,
    across: Tuple[PointCoord, PointCoord],
) -> None:
    x, z = across
    complex_ = two_piece_paths.complex
    wall = complex_.wall(complex_.root, 0, ())
    y = PointCoord(
        complex_.root,
        CollarPoint(0, wall.coset, Fraction(3, 4), complex_.collar(0)),
        Fraction(1),
    )
    w, defect = two_piece_paths.horizontal_slide(x, y, z)
    assert defect <= 0
    assert complex_.on_wall_key(w) is not None
    assert slide_defects(two_piece_paths, [(x, y, z)]) == [defect]


@pytest.mark.parametrize("seed", range(10))
def test_reversal_and_restriction_are_exact(
    two_piece_paths: SpecialPathSystem, seed: int
) -> None:
    sampler = PointSampler(two_piece_paths.complex)
    x, y = sampler.random_pair(np.random.default_rng(seed), 3)
    points = two_piece_paths.special_path(x, y).breakpoints
    backwards = two_piece_paths.special_path(y, x).breakpoints
    assert tuple(reversed(backwards)) == points
    for i, j in combinations(range(len(points)), 2):
        stretch = two_piece_paths.special_path(points[i], points[j])
        assert stretch.breakpoints == points[i : j + 1]


def test_bridges_must_end_on_boundary_lines(
    two_piece_paths: SpecialPathSystem,
    across: Tuple[PointCoord, PointCoord],
) -> None:
    complex_ = two_piece_paths.complex
    with patch.object(
        complex_,
        "project_to_line",
        return_value=(TreePoint(()), Fraction(0)),
    ):
        with pytest.raises(InternalConsistencyError):
            two_piece_paths.special_path(*across)


def test_slide_point_must_stay_on_its_wall(
    two_piece_paths: SpecialPathSystem,
    across: Tuple[PointCoord, PointCoord],
) -> None:
    x, z = across
    complex_ = two_piece_paths.complex
    wall = complex_.wall(complex_.root, 0, ())
    y = PointCoord(
        complex_.root,
        CollarPoint(0, wall.coset, Fraction(3, 4), complex_.collar(0)),
        Fraction(1),
    )
    with patch.object(
        complex_,
        "transfer",
        side_effect=lambda point, copy: PointCoord(
            copy, TreePoint(()), point.fiber
        ),
    ):
        with pytest.raises(InternalConsistencyError):
            two_piece_paths.horizontal_slide(x, y, z)


def test_horizontal_slide_needs_a_wall_point(
    two_piece_paths: SpecialPathSystem,
    across: Tuple[PointCoord, PointCoord],
) -> None:
    x, z = across
    with pytest.raises(NotOnWallError):
        two_piece_paths.horizontal_slide(x, x, z)


def test_oracle_is_exact_in_one_copy(
    two_piece_paths: SpecialPathSystem,
) -> None:
    root = two_piece_paths.complex.root
    x = PointCoord(root, TreePoint(()), Fraction(0))
    y = PointCoord(root, TreePoint((B,)), Fraction(1, 2))
    oracle = DistanceOracle(two_piece_paths)
    assert oracle.approx_distance(x, y, 0.5) == pytest.approx(
        float(two_piece_paths.complex.product_distance(root, x, y))
    )


def test_oracle_rejects_bad_resolution(
    two_piece_paths: SpecialPathSystem,
    across: Tuple[PointCoord, PointCoord],
) -> None:
    with pytest.raises(ValueError):
        DistanceOracle(two_piece_paths).approx_distance(*across, 0)


def test_oracle_enforces_the_wall_budget(
    two_piece_paths: SpecialPathSystem,
    across: Tuple[PointCoord, PointCoord],
) -> None:
    oracle = DistanceOracle(two_piece_paths, max_walls=0)
    with pytest.raises(OracleBudgetError):
        oracle.approx_distance(*across, 0.25)


def test_oracle_lies_between_the_bounds(
    two_piece_paths: SpecialPathSystem,
    across: Tuple[PointCoord, PointCoord],
) -> None:
    x, y = across
    oracle = DistanceOracle(two_piece_paths)
    estimate = oracle.approx_distance(x, y, 0.25)
    path = two_piece_paths.special_path(x, y)
    assert float(two_piece_paths.distance_lower_bound(x, y)) <= (
        estimate + 1e-6
    )
    assert estimate <= float(two_piece_paths.path_length(path)) + 1e-6


def test_qg_fit_is_reproducible(two_piece_paths: SpecialPathSystem) -> None:
    first = two_piece_paths.qg_fit(4, 1, 0.5, seed=3)
    second = two_piece_paths.qg_fit(4, 1, 0.5, seed=3)
    assert first.kappa == second.kappa >= 1.0
    assert [row["x"] for row in first.rows] == [
        row["x"] for row in second.rows
    ]
