"""
Unit tests for the product metrics.
"""

from fractions import Fraction
from typing import Type

import pytest

from core.geometry.metrics import (
    METRIC_CLASSES,
    L1Metric,
    L2Metric,
    ProductMetricProtocol,
    get_metric,
)


@pytest.mark.parametrize("metric_cls", METRIC_CLASSES.values())
def test_degenerate_directions_are_exact(
    metric_cls: Type[ProductMetricProtocol],
) -> None:
    metric = metric_cls()
    assert metric.combine(Fraction(3, 4), 0) == Fraction(3, 4)
    assert metric.combine(0, Fraction(-1, 2)) == Fraction(1, 2)


@pytest.mark.parametrize("metric_cls", METRIC_CLASSES.values())
def test_metric_is_symmetric_in_sign(
    metric_cls: Type[ProductMetricProtocol],
) -> None:
    metric = metric_cls()
    assert metric.combine(3, -4) == metric.combine(3, 4)


def test_l1_dominates_l2() -> None:
    assert L1Metric().combine(3, 4) == 7
    assert L2Metric().combine(3, 4) == pytest.approx(5.0)


def test_get_metric_falls_back_to_l2() -> None:
    assert isinstance(get_metric("l1"), L1Metric)
    assert isinstance(get_metric("chebyshev"), L2Metric)
