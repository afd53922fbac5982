"""Surgery slopes and Hirzebruch-Jung continued fractions.

A slope p/q (p, q > 0 coprime) stands for -p/q surgery; only the positive
pair is ever stored.  Its HJ expansion is

    p/q = a_1 - 1/(a_2 - 1/(... - 1/a_l)),   a_i >= 2 for i >= 2,

with n = a_1 = ceil(p/q) and p = n*q - r.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence


class SlopeError(ValueError):
    pass


@dataclass(frozen=True)
class Slope:
    p: int
    q: int
    a: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.a[0]

    @property
    def r(self) -> int:
        return self.n * self.q - self.p

    @property
    def length(self) -> int:
        return len(self.a)

    def delta(self, j: int) -> int:
        return (j + self.r) // self.q

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"

    @classmethod
    def parse(cls, text: str) -> "Slope":
        """Parse the ASCII form ``"p/q"`` (a bare ``"p"`` means q = 1)."""
        m = _SLOPE_RE.fullmatch(text)
        if m is None:
            raise SlopeError(f"malformed slope {text!r}; expected unsigned 'p/q'")
        return hj_expand(int(m.group(1)), int(m.group(2) or 1))


_SLOPE_RE = re.compile(r"(\d+)(?:/(\d+))?")


def hj_expand(p: int, q: int) -> Slope:
    if p < 1 or q < 1:
        raise SlopeError(f"slope {p}/{q}: p and q must be positive")
    if math.gcd(p, q) != 1:
        raise SlopeError(f"slope {p}/{q}: p and q must be coprime")
    a = []
    num, den = p, q
    while den:
        c = -(-num // den)
        a.append(c)
        num, den = den, c * den - num
    return Slope(p, q, tuple(a))


def hj_evaluate(a: Sequence[int]) -> Fraction:
    if not a:
        raise ValueError("empty continued fraction")
    value = Fraction(a[-1])
    for c in reversed(a[:-1]):
        if value == 0:
            raise ZeroDivisionError(f"continued fraction {list(a)} has a zero tail")
        value = c - 1 / value
    return value


def slope_params(s: Slope) -> tuple[int, int, Callable[[int], int]]:
    """Return ``(n, r, delta)`` with delta(j) = floor((j + r)/q) for 0 <= j < q."""
    return s.n, s.r, s.delta


def word_to_json(a: Sequence[int]) -> str:
    return json.dumps(list(a), separators=(",", ":"))


def fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"
