"""
Unit tests for the seeded sampling helpers.
"""

from fractions import Fraction
from unittest.mock import patch

import numpy as np
import pytest

from core.sampling import (
    choose,
    parallel_map,
    random_fraction,
    spawn_generators,
    thread_cap,
)


def test_spawned_streams_are_reproducible() -> None:
    first = [rng.integers(0, 1000, size=4) for rng in spawn_generators(5, 3)]
    second = [rng.integers(0, 1000, size=4) for rng in spawn_generators(5, 3)]
    for a, b in zip(first, second):
        assert np.array_equal(a, b)


def test_thread_cap_honours_the_environment(
    monkeypatch: pytest.MonkeyPatch,
) -> None:
    monkeypatch.setenv("QCLAB_THREADS", "3")
    assert thread_cap() == 3
    monkeypatch.setenv("QCLAB_THREADS", "0")
    assert thread_cap() == 1


def test_thread_cap_reads_max_threads(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.delenv("QCLAB_THREADS", raising=False)
    with patch("core.sampling.get_config_value") as mock_config:
        mock_config.side_effect = lambda path, key, default=None: (
            6 if key == "max_threads" else default
        )
        assert thread_cap() == 6


def test_malformed_thread_count_falls_back_to_config(
    monkeypatch: pytest.MonkeyPatch,
) -> None:
    monkeypatch.setenv("QCLAB_THREADS", "many")
    assert thread_cap() >= 1


@pytest.mark.parametrize("threads", ["1", "4"])
def test_parallel_map_keeps_input_order(
    monkeypatch: pytest.MonkeyPatch, threads: str
) -> None:
    monkeypatch.setenv("QCLAB_THREADS", threads)
    assert parallel_map(lambda n: n * n, range(20)) == [
        n * n for n in range(20)
    ]
    assert parallel_map(lambda n: n, []) == []


def test_results_do_not_depend_on_thread_count(
    monkeypatch: pytest.MonkeyPatch,
) -> None:
    def draw(rng: np.random.Generator) -> int:
        return int(rng.integers(0, 10**6))

    monkeypatch.setenv("QCLAB_THREADS", "1")
    sequential = parallel_map(draw, spawn_generators(9, 16))
    monkeypatch.setenv("QCLAB_THREADS", "8")
    threaded = parallel_map(draw, spawn_generators(9, 16))
    assert sequential == threaded


def test_random_fraction_lies_on_the_lattice() -> None:
    rng = np.random.default_rng(0)
    for _ in range(50):
        value = random_fraction(rng, -2, 2, denominator=8)
        assert -2 <= value <= 2
        assert isinstance(value, Fraction)
        assert (value * 8).denominator == 1


def test_choose_picks_an_element() -> None:
    rng = np.random.default_rng(1)
    assert choose(rng, ["only"]) == "only"
    assert choose(rng, [1, 2, 3]) in (1, 2, 3)
