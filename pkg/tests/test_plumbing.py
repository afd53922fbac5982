import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from rationalsurgery import Slope, hj_expand
from rationalsurgery import plumbing as pl
from rationalsurgery.linalg import det, is_negative_definite


def brute_K(a):
    return sorted(k for k in pl.initial_covectors(a) if not pl.has_full_tank(k, a))


def small_slopes(max_p):
    for p in range(1, max_p + 1):
        for q in range(1, 2 * p + 1):
            if math.gcd(p, q) == 1:
                yield hj_expand(p, q)


def test_matrix_examples():
    assert pl.build_matrix(Slope.parse("2")).rows == [[-2]]
    assert pl.build_matrix(Slope.parse("7/3")).rows == [[-3, 1, 0], [1, -2, 1], [0, 1, -2]]


def test_determinant_is_p():
    for s in small_slopes(25):
        Q = pl.build_matrix(s)
        assert abs(pl.determinant(Q)) == s.p
        assert is_negative_definite(Q.rows)


def test_push_down_examples():
    assert pl.push_down((2,), 0, (2,)) == (-2,)
    assert pl.push_down((3, 0, 0), 0, (3, 2, 2)) == (-3, 2, 0)
    with pytest.raises(IndexError):
        pl.push_down((3, 0, 0), 3, (3, 2, 2))


@pytest.mark.parametrize(
    "k, a, expected",
    [((2, 2), (2, 2), True), ((3, 0, 2), (3, 2, 2), True), ((3, 0, 0), (3, 2, 2), False)],
)
def test_full_tank(k, a, expected):
    assert pl.has_full_tank(k, a) is expected


@pytest.mark.parametrize("tail, expected", [((2, 0), True), ((0, 2), True), ((0, 0), False)])
def test_left_full(tail, expected):
    assert pl.is_left_full(tail, (2, 2)) is expected


@pytest.mark.parametrize(
    "k, a, kind",
    [
        ((0,), (2,), pl.PathKind.MAXIMISING),
        ((2, 2), (2, 2), pl.PathKind.NON_MAXIMISING),
        ((3, 0, 0), (3, 2, 2), pl.PathKind.MAXIMISING),
    ],
)
def test_classify_examples(k, a, kind):
    assert pl.classify_path(k, a) is kind
    assert pl.push_down_path(k, a)[0] is kind


def test_path_recording_agrees_with_fast_classifier():
    for s in small_slopes(12):
        for k in pl.initial_covectors(s.a):
            kind, path = pl.push_down_path(k, s.a)
            assert kind is pl.classify_path(k, s.a)
            assert path[0] == tuple(k)


def test_enumeration_examples():
    assert list(pl.enumerate_K(Slope.parse("2"))) == [(0,), (2,)]
    assert len(pl.enumerate_K(Slope.parse("7/3"))) == 7
    assert len(pl.enumerate_K(Slope.parse("13"))) == 13


def test_dfs_matches_brute_force():
    for s in small_slopes(20):
        assert sorted(pl.enumerate_K(s)) == brute_K(s.a)


def test_K_is_a_full_set_of_classes():
    for s in small_slopes(14):
        Q = pl.build_matrix(s)
        fam = pl.enumerate_K(s)
        keys = {pl.class_key(k, Q) for k in fam}
        assert len(keys) == s.p


def test_class_key_agrees_with_equivalence():
    s = Slope.parse("7/3")
    Q = pl.build_matrix(s)
    ks = list(pl.initial_covectors(s.a))
    for k1, k2 in itertools.combinations(ks, 2):
        assert pl.equivalent(k1, k2, Q) == (pl.class_key(k1, Q) == pl.class_key(k2, Q))


def test_push_down_stays_in_class_and_keeps_square():
    for s in small_slopes(14):
        Q = pl.build_matrix(s)
        for k in pl.enumerate_K(s):
            for i, w in enumerate(s.a):
                if k[i] == w:
                    moved = pl.push_down(k, i, s.a)
                    assert pl.square(moved, Q) == pl.square(k, Q)
                    assert pl.equivalent(moved, k, Q)


def test_K_prime_examples():
    s = Slope.parse("7/3")
    assert pl.fibre_census(pl.enumerate_K_prime(s)) == {-1: 1, 1: 3, 3: 3}
    s = Slope.parse("9")
    assert pl.enumerate_K_prime(s).members == pl.enumerate_K(s).members


def test_K_prime_members_are_maximisers_in_the_same_classes():
    for s in small_slopes(14):
        Q = pl.build_matrix(s)
        K = pl.enumerate_K(s)
        Kp = pl.enumerate_K_prime(s)
        assert len(Kp) == s.p
        assert sorted(pl.class_key(k, Q) for k in K) == sorted(pl.class_key(k, Q) for k in Kp)
        best = {}
        for k in K:
            best[pl.class_key(k, Q)] = pl.square(k, Q)
        for k in Kp:
            assert pl.is_characteristic(k, s.a)
            assert pl.square(k, Q) == best[pl.class_key(k, Q)]
        assert pl.fibre_census(Kp) == pl.expected_fibre_census(s)


def test_nudge_is_a_push_down_chain():
    a = (3, 2, 2)
    assert pl.nudge((1, 0, 2), a) == pl.push_down(pl.push_down((1, 0, 2), 2, a), 1, a)
    assert pl.nudge((1, 0, 2), a)[0] == 3
    assert pl.nudge((1, 0, 0), a) is None


def test_square_examples():
    Q = pl.build_matrix(Slope.parse("2"))
    assert pl.square((0,), Q) == 0
    assert pl.square((2,), Q) == -2


def test_d_examples():
    assert sorted(pl.lens_d_invariants(Slope.parse("2/1")).values()) == [Fraction(-1, 4), Fraction(1, 4)]
    assert list(pl.lens_d_invariants(Slope.parse("1/1")).values()) == [0]
    assert pl.lens_d_recursion(1, 1, 0) == 0
    assert sorted(pl.lens_d_recursion(2, 1, i) for i in range(2)) == [Fraction(-1, 4), Fraction(1, 4)]
    d73 = sorted(pl.lens_d_invariants(Slope.parse("7/3")).values())
    assert d73 == sorted(pl.lens_d_recursion(7, 3, i) for i in range(7))


def test_recursion_rejects_bad_index():
    with pytest.raises(IndexError):
        pl.lens_d_recursion(5, 2, 5)
    with pytest.raises(ValueError):
        pl.lens_d_recursion(4, 2, 0)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 40), st.integers(1, 80))
def test_d_oracle_property(p, q):
    if math.gcd(p, q) != 1:
        return
    s = hj_expand(p, q)
    assert sorted(pl.lens_d_invariants(s).values()) == sorted(pl.lens_d_recursion(p, q, i) for i in range(p))


def test_family_json():
    out = pl.family_to_json(pl.enumerate_K(Slope.parse("2")))
    assert out == {"slope": "2/1", "kind": "K", "covectors": [[0], [2]], "d": [["0", "1/4"], ["2", "-1/4"]]}
