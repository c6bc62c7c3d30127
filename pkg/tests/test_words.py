"""Reduced-word enumeration over two letters and their inverses."""

import pytest

from liegen import words
from liegen.errors import InvalidConfig


def test_ball_size_formula():
    for L in range(7):
        assert words.ball_size(L) == 2 * 3 ** L - 1


def test_iterator_counts_and_uniqueness():
    for L in (0, 1, 2, 4, 6):
        seen = [tuple(w) for w in words.WordIterator(L)]
        assert len(seen) == words.ball_size(L)
        assert len(set(seen)) == len(seen)
        assert all(len(w) <= L for w in seen)
        assert all(words.is_reduced(list(w)) for w in seen)


def test_iterator_order_is_length_lex():
    ws = [tuple(w) for w in words.WordIterator(3)]
    assert ws[0] == ()
    lens = [len(w) for w in ws]
    assert lens == sorted(lens)
    for length in range(4):
        bucket = [w for w in ws if len(w) == length]
        assert bucket == sorted(bucket)


def test_parse_format_round_trip():
    assert words.parse_word("abAB") == [0, 1, 2, 3]
    assert words.format_word([0, 1, 2, 3]) == "abAB"
    assert words.parse_word("") == []
    for text in ("aA", "abba", "BAba"):
        assert words.format_word(words.parse_word(text)) == text
    with pytest.raises(InvalidConfig):
        words.parse_word("abc")


def test_inverse_letter_is_involution():
    for c in range(4):
        assert words.inverse_letter(words.inverse_letter(c)) == c
    # a <-> A and b <-> B
    assert words.LETTERS[words.inverse_letter(0)] == "A"
    assert words.LETTERS[words.inverse_letter(1)] == "B"


def test_is_reduced():
    assert words.is_reduced(words.parse_word("ab"))
    assert words.is_reduced([])
    assert not words.is_reduced(words.parse_word("aA"))
    assert not words.is_reduced(words.parse_word("abBa"))


def test_word_table_shapes():
    letters, lengths = words.word_table(3)
    n = words.ball_size(3)
    assert letters.shape == (n, 3)
    assert lengths.shape == (n,)
    assert lengths[0] == 0
    # padding is -1 past each word's length
    for i in range(n):
        row = letters[i]
        assert all(row[j] >= 0 for j in range(lengths[i]))
        assert all(row[j] == -1 for j in range(lengths[i], 3))
