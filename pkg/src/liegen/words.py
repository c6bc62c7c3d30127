"""Reduced words in two generators and their inverses.

Letters are "a", "b" for the generators and "A", "B" for their inverses.
A word is reduced when no letter is immediately followed by its inverse.
Iteration order is length first, then lexicographic in the letter order
a < b < A < B, starting with the empty word.  This order is part of the
deterministic contract of everything that walks words.
"""

import numpy as np

from .errors import InvalidConfig

LETTERS = "abAB"
_CODE = {c: i for i, c in enumerate(LETTERS)}


def inverse_letter(code: int) -> int:
    return (code + 2) % 4


def parse_word(text: str):
    """Letter codes of a word; raises ValueError on foreign characters."""
    try:
        return [_CODE[c] for c in text]
    except KeyError:
        bad = next(c for c in text if c not in _CODE)
        raise InvalidConfig(f"bad word letter {bad!r} in {text!r}") from None


def format_word(codes) -> str:
    return "".join(LETTERS[c] for c in codes)


def is_reduced(codes) -> bool:
    return all(codes[i + 1] != inverse_letter(codes[i])
               for i in range(len(codes) - 1))


def ball_size(max_len: int) -> int:
    """Number of reduced words of length at most max_len: 2 * 3^L - 1."""
    if max_len < 0:
        return 0
    return 2 * 3 ** max_len - 1


class WordIterator:
    """Yields all reduced words of length <= max_len as code lists, in
    length-lex order.  The empty word comes first."""

    def __init__(self, max_len: int):
        if max_len < 0:
            raise InvalidConfig("max_len must be >= 0")
        self.max_len = max_len

    def __iter__(self):
        yield []
        frontier = [[]]
        for _ in range(self.max_len):
            nxt = []
            for w in frontier:
                forbidden = inverse_letter(w[-1]) if w else -1
                for c in range(4):
                    if c != forbidden:
                        u = w + [c]
                        yield u
                        nxt.append(u)
            frontier = nxt

    def __len__(self):
        return ball_size(self.max_len)


def word_table(max_len: int):
    """All reduced words of length <= max_len packed into a pair of numpy
    arrays (letters, lengths) for consumption by compiled kernels.

    letters is int8 of shape (count, max_len) padded with -1; lengths is
    int64 of shape (count,).  Rows follow WordIterator order."""
    count = ball_size(max_len)
    letters = np.full((count, max(max_len, 1)), -1, dtype=np.int8)
    lengths = np.zeros(count, dtype=np.int64)
    for row, w in enumerate(WordIterator(max_len)):
        lengths[row] = len(w)
        for k, c in enumerate(w):
            letters[row, k] = c
    return letters, lengths
