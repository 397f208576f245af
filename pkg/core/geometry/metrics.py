"""
Product metric protocol.

A piece is (tree) x (line); its metric combines the base distance and
the fiber distance. The L2 combination is the primary CAT(0) metric,
the L1 combination is the one the quasi-geodesic estimates work with.
"""

# Standard library imports
import math
from fractions import Fraction
from typing import Protocol, Type, Union

Real = Union[int, float, Fraction]


class ProductMetricProtocol(Protocol):
    """Define the protocol for product metrics on a piece."""

    name: str

    def combine(self, base: Real, fiber: Real) -> Real:
        """Combine base and fiber distances into a piece distance."""


class L1Metric:
    """Sum of base and fiber distances; exact on Fractions."""

    name = "L1"

    def __repr__(self) -> str:
        return "L1Metric()"

    def combine(self, base: Real, fiber: Real) -> Real:
        """Return base + |fiber|."""
        return abs(base) + abs(fiber)


class L2Metric:
    """Euclidean combination of base and fiber distances."""

    name = "L2"

    def __repr__(self) -> str:
        return "L2Metric()"

    def combine(self, base: Real, fiber: Real) -> Real:
        """Return sqrt(base^2 + fiber^2)."""
        if base == 0 or fiber == 0:
            return abs(base) + abs(fiber)
        return math.hypot(float(base), float(fiber))


METRIC_CLASSES: dict[str, Type[ProductMetricProtocol]] = {
    "L1": L1Metric,
    "L2": L2Metric,
}


def get_metric(name: str) -> ProductMetricProtocol:
    """Instantiate a metric by name, L2 when the name is unknown."""
    return METRIC_CLASSES.get(name.upper(), L2Metric)()
