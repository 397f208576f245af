"""
Seeded sampling helpers.

Random streams are split from one numpy SeedSequence so each sample owns
an independent generator; the worker pool returns results in input
order. Together these keep reports identical for identical seeds no
matter how many threads run.
"""

# Standard library imports
import os
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Callable, Iterable, List, Sequence, TypeVar

# Third-party imports
import numpy as np

# Local project imports
from config.settings import CONFIG_FILE_PATH
from core.config_loader import get_config_value
from core.logger import logger

T = TypeVar("T")
R = TypeVar("R")


def spawn_generators(seed: int, count: int) -> List[np.random.Generator]:
    """
    Split a seed into independent generators.

    Args:
        seed (int): Experiment seed.
        count (int): Number of streams.

    Returns:
        List[np.random.Generator]: One generator per stream.
    """
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.default_rng(child) for child in children]


def thread_cap() -> int:
    """Return the worker count, honouring QCLAB_THREADS first."""
    raw = os.environ.get("QCLAB_THREADS")
    if raw is not None:
        try:
            return max(1, int(raw))
        except ValueError:
            logger.warning("Ignoring malformed QCLAB_THREADS=%r", raw)
    configured = get_config_value(CONFIG_FILE_PATH, "max_threads", default=4)
    return max(1, int(configured))


def parallel_map(func: Callable[[T], R], items: Iterable[T]) -> List[R]:
    """
    Apply func to every item on the worker pool, keeping input order.

    Args:
        func (Callable[[T], R]): Pure function of one item.
        items (Iterable[T]): Work items.

    Returns:
        List[R]: Results in the order of items.
    """
    work = list(items)
    workers = min(thread_cap(), max(1, len(work)))
    if workers == 1:
        return [func(item) for item in work]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, work))


def random_fraction(
    rng: np.random.Generator, low: int, high: int, denominator: int = 8
) -> Fraction:
    """Draw a rational in [low, high] on the lattice (1/denominator)Z."""
    numerator = int(
        rng.integers(low * denominator, high * denominator, endpoint=True)
    )
    return Fraction(numerator, denominator)


def choose(rng: np.random.Generator, options: Sequence[T]) -> T:
    """Pick one element of a non-empty sequence."""
    return options[int(rng.integers(0, len(options)))]
