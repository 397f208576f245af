"""
Reduced words over edge labels.

A letter is a pair (label, sign) with sign +1 or -1. Words are tuples of
letters; they address both free-group elements and vertices of a
spine's universal cover (reduced edge paths from the base vertex).
"""

from typing import Iterable, Mapping, Optional, Tuple

Letter = Tuple[str, int]
Word = Tuple[Letter, ...]


def inverse_letter(letter: Letter) -> Letter:
    """Return the letter traversing the same edge backwards."""
    return (letter[0], -letter[1])


def invert(word: Word) -> Word:
    """Return the inverse word."""
    return tuple(inverse_letter(letter) for letter in reversed(word))


def reduce_word(letters: Iterable[Letter]) -> Word:
    """Freely reduce a letter sequence."""
    stack: list[Letter] = []
    for letter in letters:
        if stack and stack[-1] == inverse_letter(letter):
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def concat(*words: Word) -> Word:
    """Multiply words and reduce the result."""
    return reduce_word(letter for word in words for letter in word)


def power(word: Word, exponent: int) -> Word:
    """Return the reduced word for word**exponent."""
    base = word if exponent >= 0 else invert(word)
    return reduce_word(base * abs(exponent))


def common_prefix_length(u: Word, v: Word) -> int:
    """Length of the longest common prefix of two words."""
    length = 0
    for a, b in zip(u, v):
        if a != b:
            break
        length += 1
    return length


def is_cyclically_reduced(word: Word) -> bool:
    """True for reduced words whose last letter does not cancel the first."""
    if reduce_word(word) != word:
        return False
    return len(word) < 2 or word[-1] != inverse_letter(word[0])


def is_proper_power(word: Word) -> bool:
    """True if the word equals r**k for some word r and k >= 2."""
    length = len(word)
    for period in range(1, length):
        if length % period == 0 and word == word[:period] * (
            length // period
        ):
            return True
    return False


def word_key(word: Word, order: Mapping[str, int]) -> Tuple[int, ...]:
    """
    Sort key: shortest first, then label order, positive before negative.

    Args:
        word (Word): Word to rank.
        order (Mapping[str, int]): Position of every label.

    Returns:
        Tuple[int, ...]: A key usable with min() and sorted().
    """
    key = [len(word)]
    for label, sign in word:
        key.extend((order[label], 0 if sign > 0 else 1))
    return tuple(key)


def power_exponent(word: Word, root: Word) -> Optional[int]:
    """
    Return n with word == root**n, or None.

    Args:
        word (Word): Reduced word to test.
        root (Word): Cyclically reduced, non-empty word.

    Returns:
        int | None: The exponent, or None if word is not a power of root.
    """
    if not word:
        return 0
    if len(word) % len(root):
        return None
    n = len(word) // len(root)
    if power(root, n) == word:
        return n
    if power(root, -n) == word:
        return -n
    return None


def format_word(word: Word) -> str:
    """Render a word as space-separated labels, inverses as label^-1."""
    return " ".join(
        label if sign > 0 else f"{label}^-1" for label, sign in word
    )
