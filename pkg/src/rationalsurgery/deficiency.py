"""Correction-term deficiencies of -p/q and -n surgery from V/H data.

``V`` lists V_0, V_1, ... (zero beyond the list).  ``H`` lists H_0, H_{-1},
H_{-2}, ...; when omitted, H_i = V_{-i}.  Data must already be that of the
mirrored knot: nothing here mirrors.
"""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from .numeric import Slope


class KnotDataError(ValueError):
    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


@dataclass(frozen=True)
class KnotData:
    V: tuple[int, ...]
    H: tuple[int, ...] | None = None

    def v(self, i: int) -> int:
        if i < 0:
            raise IndexError(f"V_{i} is not defined")
        return self.V[i] if i < len(self.V) else 0

    def h(self, i: int) -> int:
        if i > 0:
            raise IndexError(f"H_{i} is not defined")
        if self.H is None:
            return self.v(-i)
        if -i < len(self.H):
            return self.H[-i]
        if self.H[-1] != 0:
            raise KnotDataError(
                f"H_{i} is needed but the supplied H list stops at H_{1 - len(self.H)} "
                f"with a nonzero value"
            )
        return 0

    def to_json(self) -> dict:
        return {"V": list(self.V), "H": None if self.H is None else list(self.H)}


def validate_vh(V: Sequence[int], H: Sequence[int] | None = None) -> KnotData:
    """Check V_0 = H_0, non-negativity and monotonicity; raise on the first violation."""
    V = tuple(int(x) for x in V) or (0,)
    for i, x in enumerate(V):
        if x < 0:
            raise KnotDataError(f"V_{i} = {x} is negative", i)
        if i and x > V[i - 1]:
            raise KnotDataError(f"V is not non-increasing at V_{i} = {x} > V_{i - 1} = {V[i - 1]}", i)
    if H is not None:
        H = tuple(int(x) for x in H)
        if not H:
            raise KnotDataError("empty H list", 0)
        if H[0] != V[0]:
            raise KnotDataError(f"H_0 = {H[0]} differs from V_0 = {V[0]}", 0)
        for k, x in enumerate(H):
            if x < 0:
                raise KnotDataError(f"H_{-k} = {x} is negative", -k)
            # H non-decreasing in the index, so non-increasing along the list
            if k and x > H[k - 1]:
                raise KnotDataError(f"H is not non-decreasing at H_{-k} = {x} > H_{1 - k} = {H[k - 1]}", -k)
    return KnotData(V, H)


def rational_deficiencies(d: KnotData, s: Slope) -> list[int]:
    """D^{p/q}(t_i) = 2 max{V_{floor(i/q)}, H_{floor((i-p)/q)}} for 0 <= i < p."""
    p, q = s.p, s.q
    return [2 * max(d.v(i // q), d.h((i - p) // q)) for i in range(p)]


def integral_deficiencies(d: KnotData, n: int) -> list[int]:
    """D^n(t_i) = 2 max{V_i, H_{i-n}} for 0 <= i < n."""
    return [2 * max(d.v(i), d.h(i - n)) for i in range(n)]


@dataclass(frozen=True)
class DeficiencyTable:
    slope: Slope
    values: tuple[int, ...]
    integral_values: tuple[int, ...]

    @property
    def min(self) -> int:
        """The minimal integral deficiency 2m."""
        return min(self.integral_values)

    def to_json(self) -> dict:
        return {
            "slope": str(self.slope),
            "n": self.slope.n,
            "r": self.slope.r,
            "values": list(self.values),
            "integral_values": list(self.integral_values),
            "min": self.min,
        }


def deficiency_rational(d: KnotData, s: Slope) -> DeficiencyTable:
    return DeficiencyTable(
        s, tuple(rational_deficiencies(d, s)), tuple(integral_deficiencies(d, s.n))
    )


@dataclass(frozen=True)
class Minimisers:
    m: int
    indices: tuple[int, ...]
    central: tuple[int, ...]

    @property
    def contains_central(self) -> bool:
        return set(self.central) <= set(self.indices)

    @property
    def is_interval(self) -> bool:
        return self.indices == tuple(range(self.indices[0], self.indices[-1] + 1))


def central_indices(n: int) -> tuple[int, ...]:
    if n == 1:
        return (0,)
    return (n // 2,) if n % 2 == 0 else ((n - 1) // 2, (n + 1) // 2)


def integral_minimisers(d: KnotData, n: int) -> Minimisers:
    """Minimal integral deficiency 2m and every label attaining it.

    For conjugation-symmetric data (the default H rule) the labels form an
    interval containing the central ones; with an asymmetric explicit H this
    can fail, so it is reported rather than enforced.
    """
    values = integral_deficiencies(d, n)
    low = min(values)
    return Minimisers(
        low // 2, tuple(i for i, x in enumerate(values) if x == low), central_indices(n)
    )


@dataclass(frozen=True)
class SumIdentity:
    holds: bool
    lhs: int
    rhs: int


def sum_identity_check(d: KnotData, s: Slope) -> SumIdentity:
    """sum D^{p/q} == q * sum D^n - r * min D^n."""
    table = deficiency_rational(d, s)
    lhs = sum(table.values)
    rhs = s.q * sum(table.integral_values) - s.r * table.min
    return SumIdentity(lhs == rhs, lhs, rhs)


@dataclass(frozen=True)
class SymmetryWitness:
    holds: bool
    rational: dict[int, int]
    integral: dict[int, int]
    copies: int
    removed_value: int
    removed_count: int
    expected: dict[int, int] = field(default_factory=dict)


def symmetry_check(d: KnotData, s: Slope) -> SymmetryWitness:
    """Multiset form of the fibre structure: the rational deficiencies are q
    copies of the integral ones with r copies of the minimum taken away."""
    table = deficiency_rational(d, s)
    rational = Counter(table.values)
    expected = Counter()
    for value, count in Counter(table.integral_values).items():
        expected[value] = s.q * count
    expected[table.min] -= s.r
    expected = +expected
    return SymmetryWitness(
        holds=rational == expected,
        rational=dict(sorted(rational.items())),
        integral=dict(sorted(Counter(table.integral_values).items())),
        copies=s.q,
        removed_value=table.min,
        removed_count=s.r,
        expected=dict(sorted(expected.items())),
    )


class Hypothesis(enum.Enum):
    SATISFIED_ODD = "SATISFIED_ODD"
    SATISFIED_EVEN = "SATISFIED_EVEN"
    SATISFIED_Q2 = "SATISFIED_Q2"
    NOT_SATISFIED = "NOT_SATISFIED"

    @property
    def satisfied(self) -> bool:
        return self is not Hypothesis.NOT_SATISFIED


def vanishing_hypothesis(d: KnotData, s: Slope) -> tuple[Hypothesis, int]:
    """Which vanishing-deficiency hypothesis of the obstruction holds.

    n odd needs one vanishing rational deficiency; n even needs q - r + 1 of
    them, relaxed to a single one when q = 2.
    """
    count = sum(1 for x in rational_deficiencies(d, s) if x == 0)
    if s.n % 2:
        return (Hypothesis.SATISFIED_ODD if count >= 1 else Hypothesis.NOT_SATISFIED), count
    if count >= s.q - s.r + 1:
        return Hypothesis.SATISFIED_EVEN, count
    if s.q == 2 and count >= 1:
        return Hypothesis.SATISFIED_Q2, count
    return Hypothesis.NOT_SATISFIED, count


def integral_label(j: int, n: int) -> int:
    """Label i of the Spin^c structure on -n surgery determined by a maximiser
    with first coordinate j: i = (j + n)/2, except j = n gives 0."""
    if (j - n) % 2:
        raise ValueError(f"first coordinate {j} has the wrong parity for n = {n}")
    return ((j + n) // 2) % n
