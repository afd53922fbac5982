import itertools
import math

import pytest
from hypothesis import given, strategies as st

from rationalsurgery import enumerate_changemakers, is_changemaker
from rationalsurgery.acceptance import subset_sums_cover


@pytest.mark.parametrize("sigma", [(), (1, 1, 1), (1, 1, 2, 4), (0, 1), (4, 2, 1, 1), (1, 2, 3)])
def test_changemakers(sigma):
    assert is_changemaker(sigma)


@pytest.mark.parametrize("sigma", [(1, 3), (2,), (1, 1, 4), (0, 2)])
def test_non_changemakers(sigma):
    assert not is_changemaker(sigma)


def test_negative_rejected():
    with pytest.raises(ValueError):
        is_changemaker([1, -1])


@given(st.lists(st.integers(0, 20), max_size=10))
def test_matches_subset_sums(sigma):
    assert is_changemaker(sigma) == subset_sums_cover(sigma)


def test_enumeration_examples():
    assert enumerate_changemakers(0) == [()]
    assert enumerate_changemakers(2) == [(1, 1)]
    assert enumerate_changemakers(5) == [(1, 1, 1, 1, 1), (1, 2)]
    assert enumerate_changemakers(5, max_len=2) == [(1, 2)]
    with pytest.raises(ValueError):
        enumerate_changemakers(-1)


def brute(norm, max_len):
    out = set()
    for length in range(max_len + 1):
        for sigma in itertools.combinations_with_replacement(range(1, math.isqrt(norm) + 1), length):
            if sum(c * c for c in sigma) == norm and subset_sums_cover(sigma):
                out.add(sigma)
    return sorted(out)


@pytest.mark.parametrize("norm", range(0, 31))
def test_enumeration_is_complete(norm):
    max_len = min(norm, 10)
    assert enumerate_changemakers(norm, max_len) == brute(norm, max_len)
