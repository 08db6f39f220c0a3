import pytest
from hypothesis import given, strategies as st

from weightqm import words
from weightqm.words import F2, Alphabet, ResourceError, WordError

import oracles

raw_words = st.text(alphabet="aAbB", max_size=14)


@pytest.mark.parametrize("r, size", [(0, 1), (1, 5), (2, 17), (3, 53), (4, 161), (5, 485)])
def test_ball_sizes(r, size):
    assert len(F2.ball(r)) == size == 2 * 3 ** r - 1


def test_ball_matches_brute_force():
    assert sorted(F2.ball(4)) == sorted(oracles.ball(4))


def test_ball_order_is_length_then_letters():
    assert F2.ball(1) == ["", "a", "A", "b", "B"]
    assert F2.sphere(2)[:3] == ["aa", "ab", "aB"]


def test_ball_cap():
    with pytest.raises(ResourceError):
        F2.ball(9)
    assert len(Alphabet(2, ball_cap=9).ball(9)) == 2 * 3 ** 9 - 1


def test_alphabet_letters():
    assert Alphabet(3).letters == ("a", "A", "b", "B", "c", "C")
    assert F2.generators == ("a", "b")
    with pytest.raises(ValueError):
        Alphabet(0)


def test_unknown_symbol():
    with pytest.raises(WordError):
        F2.reduce("abc")
    with pytest.raises(WordError):
        words.parse_word("ax")


def test_identity_formatting():
    assert words.format_word("") == "e"
    assert words.parse_word("e") == ""
    assert words.parse_word("aAb") == "b"


@given(raw_words)
def test_reduce_matches_oracle(w):
    assert words.free_reduce(w) == oracles.reduce(w)
    assert words.is_reduced(words.free_reduce(w))


@given(raw_words, raw_words)
def test_multiply_matches_oracle(u, v):
    u, v = oracles.reduce(u), oracles.reduce(v)
    assert words.multiply(u, v) == oracles.mul(u, v)


@given(raw_words, raw_words, raw_words)
def test_group_axioms(u, v, w):
    u, v, w = map(words.free_reduce, (u, v, w))
    m = words.multiply
    assert m(m(u, v), w) == m(u, m(v, w))
    assert m(u, words.inverse(u)) == ""
    assert m("", u) == u == m(u, "")


@given(raw_words, raw_words)
def test_distance_and_geodesic(x, y):
    x, y = words.free_reduce(x), words.free_reduce(y)
    p = words.tree_geodesic(x, y)
    assert p[0] == x and p[-1] == y
    assert len(p) - 1 == words.distance(x, y) == len(words.multiply(words.inverse(x), y))
    assert all(len(words.multiply(words.inverse(u), v)) == 1 for u, v in zip(p, p[1:]))
    assert list(p) == oracles.geodesic(x, y)
    assert words.tree_geodesic(y, x) == p[::-1]


def test_common_prefix():
    assert words.common_prefix("abab", "abB") == "ab"
    assert words.common_prefix("", "a") == ""
