"""
Unit tests for the universal cover of a spine graph.
"""

from fractions import Fraction

import numpy as np
import pytest

from core.geometry.spine_tree import Axis, LinePair, SpineTree, TreePoint

WEDGE_EDGES = ((0, 0, "a"), (0, 0, "b"))
A, B = ("a", 1), ("b", 1)
A_INV, B_INV = ("a", -1), ("b", -1)


@pytest.fixture
def tree() -> SpineTree:
    """Cover of a wedge of two circles with edges of length 1/4."""
    return SpineTree(WEDGE_EDGES, Fraction(1, 4))


def test_closed_words_counts_reduced_loops(tree: SpineTree) -> None:
    assert len(tree.closed_words(0)) == 1
    assert len(tree.closed_words(1)) == 5
    assert len(tree.closed_words(2)) == 17


def test_vertex_distance(tree: SpineTree) -> None:
    assert tree.vertex_distance((A, B), (A, A)) == Fraction(1, 2)
    assert tree.vertex_distance((), (B, B, B)) == Fraction(3, 4)


def test_normalize_prefers_the_parent_side(tree: SpineTree) -> None:
    point = tree.normalize((A,), A_INV, Fraction(1, 8))
    assert point == TreePoint((), A, Fraction(1, 8))
    assert tree.normalize((), B, Fraction(1, 4)) == TreePoint((B,))
    assert tree.normalize((), B, 0) == TreePoint(())


def test_point_distance_on_and_across_edges(tree: SpineTree) -> None:
    p = TreePoint((), A, Fraction(1, 8))
    q = TreePoint((), A, Fraction(3, 16))
    r = TreePoint((B,), B, Fraction(1, 16))
    assert tree.point_distance(p, q) == Fraction(1, 16)
    assert tree.point_distance(p, r) == Fraction(1, 8) + Fraction(5, 16)
    assert tree.point_distance(p, r) == tree.point_distance(r, p)


def test_act_is_an_isometry(tree: SpineTree) -> None:
    p = TreePoint((A,), B, Fraction(1, 8))
    q = TreePoint((B_INV, A))
    element = (A, B, A_INV)
    assert tree.point_distance(
        tree.act(element, p), tree.act(element, q)
    ) == tree.point_distance(p, q)


def test_point_along_stays_on_the_geodesic(tree: SpineTree) -> None:
    p = TreePoint((A, A))
    q = TreePoint((B,))
    total = tree.point_distance(p, q)
    middle = tree.point_along(p, q, total / 2)
    assert tree.point_distance(p, middle) == total / 2
    assert tree.point_distance(middle, q) == total / 2
    assert tree.point_along(p, q, total + 1) == q


def test_axis_points_and_projection(tree: SpineTree) -> None:
    axis = Axis(tree, (), (A, B, A_INV, B_INV))
    assert axis.period == 1
    assert axis.point_at(Fraction(1, 2)) == TreePoint((A, B))
    assert axis.index_of((A, B, A_INV)) == 3
    assert axis.index_of((B,)) == -1
    assert axis.index_of((A_INV,)) is None
    foot, dist = axis.project(TreePoint((A_INV, A_INV)))
    assert foot == 0
    assert dist == Fraction(1, 2)


def test_line_pair_of_disjoint_axes(tree: SpineTree) -> None:
    first = Axis(tree, (), (A,))
    second = Axis(tree, (B, B), (A,))
    pair = first.line_pair(second, max_overlap=8)
    assert pair.gap == Fraction(1, 2)
    assert pair.a_low == pair.a_high


def test_line_pair_tree_distance_grid_matches_scalar() -> None:
    pair = LinePair(0, 1, 2, -1, 0)
    s = np.array([-1.0, 0.5, 3.0])
    t = np.array([0.0, 1.5, 2.5])
    grid = pair.tree_distance_grid(s, t)
    expected = [float(pair.tree_distance(a, b)) for a, b in zip(s, t)]
    assert grid.tolist() == pytest.approx(expected)
    assert pair.reversed().reversed() == pair
