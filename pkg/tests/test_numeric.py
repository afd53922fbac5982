import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from rationalsurgery import Slope, SlopeError, hj_evaluate, hj_expand, slope_params
from rationalsurgery.numeric import word_to_json


@pytest.mark.parametrize(
    "p, q, word",
    [(7, 3, (3, 2, 2)), (5, 1, (5,)), (1, 1, (1,)), (3, 2, (2, 2)), (2, 7, (1, 2, 2, 3))],
)
def test_expand_examples(p, q, word):
    assert hj_expand(p, q).a == word


@pytest.mark.parametrize("n", range(1, 12))
def test_two_term_family(n):
    s = hj_expand(2 * n - 1, 2)
    assert s.a == (n, 2)
    assert hj_evaluate((n, 2)) == Fraction(2 * n - 1, 2)


def test_roundtrip_exhaustive():
    for p in range(1, 501):
        for q in range(1, 501):
            if math.gcd(p, q) == 1:
                s = hj_expand(p, q)
                assert hj_evaluate(s.a) == Fraction(p, q)
                assert all(x >= 2 for x in s.a[1:])
                assert s.a[0] == -(-p // q)


@pytest.mark.parametrize("p, q", [(4, 2), (0, 1), (3, 0), (-3, 2)])
def test_expand_rejects(p, q):
    with pytest.raises(SlopeError):
        hj_expand(p, q)


def test_evaluate_examples():
    assert hj_evaluate([9]) == 9
    assert hj_evaluate([3, 2, 2]) == Fraction(7, 3)
    with pytest.raises(ZeroDivisionError):
        hj_evaluate([2, 1, 1])


def test_params():
    # floor((j + 2)/3) for j = 0, 1, 2; the values sum to r = 2
    n, r, delta = slope_params(Slope.parse("7/3"))
    assert (n, r, [delta(j) for j in range(3)]) == (3, 2, [0, 1, 1])
    n, r, delta = slope_params(Slope.parse("3/2"))
    assert (n, r, [delta(j) for j in range(2)]) == (2, 1, [0, 1])
    n, r, delta = slope_params(Slope.parse("11"))
    assert (n, r, delta(0)) == (11, 0, 0)


@given(st.integers(1, 400), st.integers(1, 400))
def test_r_range_and_delta_sum(p, q):
    if math.gcd(p, q) != 1:
        return
    s = hj_expand(p, q)
    assert p == s.n * s.q - s.r
    assert (s.r == 0) if q == 1 else (0 < s.r < q)
    assert sum(s.delta(j) for j in range(q)) == s.r


@pytest.mark.parametrize("text", ["7/-3", "-7/3", " 7/3", "7/3 ", "a/b", "7/", ""])
def test_parse_rejects(text):
    with pytest.raises(SlopeError):
        Slope.parse(text)


def test_text_forms():
    s = Slope.parse("7/3")
    assert str(s) == "7/3"
    assert word_to_json(s.a) == "[3,2,2]"
