"""
Unit tests for reduced words over edge labels.
"""

from typing import List

from hypothesis import given
from hypothesis import strategies as st

from core.geometry.free_group import (
    Letter,
    Word,
    common_prefix_length,
    concat,
    format_word,
    invert,
    is_cyclically_reduced,
    is_proper_power,
    power,
    power_exponent,
    reduce_word,
    word_key,
)

letters = st.tuples(st.sampled_from(["a", "b", "c"]), st.sampled_from([1, -1]))
raw_words = st.lists(letters, max_size=12)

A: Letter = ("a", 1)
B: Letter = ("b", 1)
A_INV: Letter = ("a", -1)
B_INV: Letter = ("b", -1)


@given(raw_words)
def test_reduce_word_is_idempotent(raw: List[Letter]) -> None:
    reduced = reduce_word(raw)
    assert reduce_word(reduced) == reduced


@given(raw_words)
def test_word_times_inverse_is_empty(raw: List[Letter]) -> None:
    word = reduce_word(raw)
    assert concat(word, invert(word)) == ()
    assert concat(invert(word), word) == ()


@given(raw_words, raw_words, raw_words)
def test_concat_is_associative(
    first: List[Letter], second: List[Letter], third: List[Letter]
) -> None:
    u, v, w = reduce_word(first), reduce_word(second), reduce_word(third)
    assert concat(concat(u, v), w) == concat(u, concat(v, w))


@given(raw_words, st.integers(min_value=-4, max_value=4))
def test_power_of_inverse_is_inverse_power(
    raw: List[Letter], exponent: int
) -> None:
    word = reduce_word(raw)
    assert power(invert(word), exponent) == invert(power(word, exponent))


def test_reduce_word_cancels_adjacent_inverses() -> None:
    assert reduce_word([A, B, B_INV, A_INV, A]) == (A,)


def test_common_prefix_length() -> None:
    assert common_prefix_length((A, B, A), (A, B, B)) == 2
    assert common_prefix_length((), (A,)) == 0


def test_cyclic_reduction_and_proper_powers() -> None:
    commutator: Word = (A, B, A_INV, B_INV)
    assert is_cyclically_reduced(commutator)
    assert not is_cyclically_reduced((A, B, A_INV))
    assert not is_proper_power(commutator)
    assert is_proper_power((A, B, A, B))


def test_power_exponent_finds_signed_powers() -> None:
    root: Word = (A, B)
    assert power_exponent(power(root, 3), root) == 3
    assert power_exponent(power(root, -2), root) == -2
    assert power_exponent((), root) == 0
    assert power_exponent((A,), root) is None


def test_word_key_orders_short_words_first() -> None:
    order = {"a": 0, "b": 1}
    words = [(B,), (A, A), (A_INV,), (A,)]
    assert sorted(words, key=lambda w: word_key(w, order)) == [
        (A,),
        (A_INV,),
        (B,),
        (A, A),
    ]


def test_format_word() -> None:
    assert format_word((A, B_INV)) == "a b^-1"
    assert format_word(()) == ""
