"""Changemaker vectors: coin sets from which every value 0..sum can be paid."""
from __future__ import annotations

from math import isqrt
from typing import Iterable, Iterator


def is_changemaker(sigma: Iterable[int]) -> bool:
    """Sorted criterion: after sorting, each coin is at most 1 + the sum of
    the smaller ones.  Zero entries are allowed."""
    coins = sorted(sigma)
    if coins and coins[0] < 0:
        raise ValueError(f"negative coin value in {coins}")
    total = 0
    for c in coins:
        if c > total + 1:
            return False
        total += c
    return True


def enumerate_changemakers(norm: int, max_len: int | None = None) -> list[tuple[int, ...]]:
    """All non-decreasing positive changemaker vectors with sum of squares
    ``norm`` and at most ``max_len`` entries, in lexicographic order."""
    if norm < 0:
        raise ValueError("norm must be non-negative")
    if max_len is None:
        max_len = norm
    return list(_changemakers(norm, max_len))


def _changemakers(norm: int, max_len: int) -> Iterator[tuple[int, ...]]:
    prefix: list[int] = []

    def rec(rem: int, low: int, total: int) -> Iterator[tuple[int, ...]]:
        if rem == 0:
            yield tuple(prefix)
            return
        slots = max_len - len(prefix)
        if slots == 0:
            return
        for c in range(low, min(total + 1, isqrt(rem)) + 1):
            prefix.append(c)
            yield from rec(rem - c * c, c, total + c)
            prefix.pop()

    yield from rec(norm, 1, 0)

