"""Linear plumbing lattice of S^3_{-p/q}(U) and its characteristic covectors.

Vertices are indexed from 0.  A covector ``k`` is a tuple of integers with
``k[i]`` the evaluation on vertex i; vertex i has weight ``-a[i]``.  The
intersection matrix is tridiagonal with diagonal ``-a[i]`` and 1 next to it.
"""
from __future__ import annotations

import enum
import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

from .linalg import det, is_negative_definite
from .numeric import Slope, fraction_str, hj_evaluate, hj_expand

Covector = tuple[int, ...]


class PathKind(enum.Enum):
    MAXIMISING = "maximising"
    NON_MAXIMISING = "non-maximising"


class FamilyKind(enum.Enum):
    INITIAL = "initial"
    K = "K"
    K_PRIME = "K'"


class PushDownLimitError(RuntimeError):
    """A push-down loop exceeded its iteration guard (should be impossible)."""


@dataclass(frozen=True)
class PlumbingMatrix:
    weights: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.weights)

    def row(self, i: int) -> list[int]:
        out = [0] * self.size
        out[i] = -self.weights[i]
        if i > 0:
            out[i - 1] = 1
        if i + 1 < self.size:
            out[i + 1] = 1
        return out

    @property
    def rows(self) -> list[list[int]]:
        return [self.row(i) for i in range(self.size)]

    def solve(self, b: Sequence[int | Fraction]) -> list[Fraction]:
        """Exact tridiagonal solve of Q z = b (Thomas algorithm)."""
        n = self.size
        if len(b) != n:
            raise ValueError(f"expected a vector of length {n}, got {len(b)}")
        diag = [Fraction(-w) for w in self.weights]
        rhs = [Fraction(x) for x in b]
        for i in range(1, n):
            if diag[i - 1] == 0:
                raise ZeroDivisionError("singular plumbing matrix")
            f = 1 / diag[i - 1]
            diag[i] -= f
            rhs[i] -= f * rhs[i - 1]
        if diag[-1] == 0:
            raise ZeroDivisionError("singular plumbing matrix")
        z = [Fraction(0)] * n
        z[-1] = rhs[-1] / diag[-1]
        for i in range(n - 2, -1, -1):
            z[i] = (rhs[i] - z[i + 1]) / diag[i]
        return z


@dataclass(frozen=True)
class CovectorFamily:
    slope: Slope
    members: tuple[Covector, ...]
    kind: FamilyKind

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


def build_matrix(s: Slope) -> PlumbingMatrix:
    Q = PlumbingMatrix(s.a)
    assert is_negative_definite(Q.rows), f"plumbing matrix of {s} is not negative definite"
    return Q


def determinant(Q: PlumbingMatrix) -> int:
    return det(Q.rows)


def is_characteristic(k: Sequence[int], a: Sequence[int]) -> bool:
    return len(k) == len(a) and all((x - w) % 2 == 0 for x, w in zip(k, a))


def initial_ranges(a: Sequence[int]) -> list[range]:
    """Parity-legal values with -a_i + 2 <= k_i <= a_i, ascending."""
    return [range(2 - w, w + 1, 2) for w in a]


def initial_covectors(a: Sequence[int]) -> Iterator[Covector]:
    """All covectors within the initial bounds, lexicographically."""
    return itertools.product(*initial_ranges(a))


def push_down(k: Sequence[int], i: int, a: Sequence[int]) -> Covector:
    """Return k + 2*PD[v_i], i.e. k plus twice row i of Q."""
    if not 0 <= i < len(a):
        raise IndexError(f"vertex {i} out of range for a graph with {len(a)} vertices")
    out = list(k)
    out[i] -= 2 * a[i]
    if i > 0:
        out[i - 1] += 2
    if i + 1 < len(a):
        out[i + 1] += 2
    return tuple(out)


def has_full_tank(k: Sequence[int], a: Sequence[int]) -> bool:
    """True iff two peaks are separated only by coordinates equal to a_m - 2."""
    open_tank = False
    for x, w in zip(k, a):
        if x == w:
            if open_tank:
                return True
            open_tank = True
        elif x != w - 2:
            open_tank = False
    return False


def first_left_full_peak(tail: Sequence[int], a_tail: Sequence[int]) -> int | None:
    """Index (within the tail) of the peak witnessing left-fullness, or None."""
    for m, (x, w) in enumerate(zip(tail, a_tail)):
        if x == w:
            return m
        if x != w - 2:
            return None
    return None


def is_left_full(tail: Sequence[int], a_tail: Sequence[int]) -> bool:
    return first_left_full_peak(tail, a_tail) is not None


def push_down_path(k: Sequence[int], a: Sequence[int]) -> tuple[PathKind, list[Covector]]:
    """Run the push-down iteration from k, always pushing the lowest peak.

    Returns the classification together with the visited covectors.  The
    iteration stops when no coordinate is a peak (maximising) or when some
    coordinate overshoots a_i (non-maximising).
    """
    limit = _iteration_guard(tuple(a))
    path = [tuple(k)]
    cur = tuple(k)
    for _ in range(limit + 1):
        if any(x > w for x, w in zip(cur, a)):
            return PathKind.NON_MAXIMISING, path
        peak = next((i for i, (x, w) in enumerate(zip(cur, a)) if x == w), None)
        if peak is None:
            return PathKind.MAXIMISING, path
        cur = push_down(cur, peak, a)
        path.append(cur)
    raise PushDownLimitError(f"push-down from {tuple(k)} did not terminate in {limit} steps")


@lru_cache(maxsize=4096)
def _iteration_guard(a: tuple[int, ...]) -> int:
    # (l + 1) * p * prod(a_i); plain p * prod(a_i) is too tight for [1, 2]
    p = abs(det(PlumbingMatrix(a).rows))
    return (len(a) + 1) * p * math.prod(a)


def classify_path(k: Sequence[int], a: Sequence[int]) -> PathKind:
    # same iteration as push_down_path, in place and without recording the path
    limit = _iteration_guard(tuple(a))
    cur = list(k)
    last = len(a) - 1
    for _ in range(limit + 1):
        peak = -1
        for i, w in enumerate(a):
            x = cur[i]
            if x > w:
                return PathKind.NON_MAXIMISING
            if x == w and peak < 0:
                peak = i
        if peak < 0:
            return PathKind.MAXIMISING
        cur[peak] -= 2 * a[peak]
        if peak > 0:
            cur[peak - 1] += 2
        if peak < last:
            cur[peak + 1] += 2
    raise PushDownLimitError(f"push-down from {tuple(k)} did not terminate in {limit} steps")


def _tank_free(a: Sequence[int]) -> Iterator[Covector]:
    """Depth-first lexicographic generation of tank-free initial covectors.

    Every tank-free prefix extends to a full tank-free covector, so the work is
    proportional to the output size (at most p per prefix length).
    """
    ell = len(a)
    ranges = initial_ranges(a)
    prefix: list[int] = []

    def rec(i: int, open_tank: bool) -> Iterator[Covector]:
        if i == ell:
            yield tuple(prefix)
            return
        w = a[i]
        for x in ranges[i]:
            if x == w:
                if open_tank:
                    continue
                nxt = True
            elif x == w - 2:
                nxt = open_tank
            else:
                nxt = False
            prefix.append(x)
            yield from rec(i + 1, nxt)
            prefix.pop()

    return rec(0, False)


def enumerate_initial(s: Slope) -> CovectorFamily:
    return CovectorFamily(s, tuple(initial_covectors(s.a)), FamilyKind.INITIAL)


def enumerate_K(s: Slope) -> CovectorFamily:
    return CovectorFamily(s, tuple(_tank_free(s.a)), FamilyKind.K)


def nudge(k: Sequence[int], a: Sequence[int]) -> Covector | None:
    """Push a covector with left-full tail down from its first tail peak to v_2.

    Returns k + 2*(PD[v_2] + ... + PD[v_m]) where v_m is the first peak of the
    tail, or None when the tail is not left-full.  The first coordinate goes up
    by 2.
    """
    m = first_left_full_peak(k[1:], a[1:])
    if m is None:
        return None
    out = tuple(k)
    for i in range(m + 1, 0, -1):
        out = push_down(out, i, a)
    return out


def enumerate_K_prime(s: Slope) -> CovectorFamily:
    """Representatives of Spin^c(S^3_{-p/q}(U)), each a maximiser, whose
    restriction to v_1 is q-to-one except over a single minimising label."""
    members = []
    for k in _tank_free(s.a):
        if -1 <= k[0] < s.n:
            moved = nudge(k, s.a)
            if moved is not None:
                members.append(moved)
                continue
        members.append(k)
    return CovectorFamily(s, tuple(members), FamilyKind.K_PRIME)


def fibre_census(family: CovectorFamily) -> dict[int, int]:
    """Multiplicity of each first coordinate, sorted by coordinate."""
    return dict(sorted(Counter(k[0] for k in family).items()))


def expected_fibre_census(s: Slope) -> dict[int, int]:
    """q members over each j in {-n+2, ..., n} (step 2), except q - r members
    over j = -1 (n odd) or j = 0 (n even).  For n = 1 the single value j = 1
    carries all q - r = p members."""
    n, q, r = s.n, s.q, s.r
    if n == 1:
        return {1: q - r}
    exceptional = -1 if n % 2 else 0
    return {j: (q - r if j == exceptional else q) for j in range(2 - n, n + 1, 2)}


def square(k: Sequence[int], Q: PlumbingMatrix) -> Fraction:
    """K Q^{-1} K^t, exactly."""
    z = Q.solve(k)
    return sum((x * y for x, y in zip(k, z)), Fraction(0))


def class_key(k: Sequence[int], Q: PlumbingMatrix) -> tuple[Fraction, ...]:
    """Invariant of the restriction of k to the boundary.

    k ~ k' iff (k - k')/2 lies in the integer row span of Q, iff Q^{-1}k/2 and
    Q^{-1}k'/2 agree modulo Z^l.
    """
    return tuple((z / 2) % 1 for z in Q.solve(k))


def equivalent(k1: Sequence[int], k2: Sequence[int], Q: PlumbingMatrix) -> bool:
    diff = [x - y for x, y in zip(k1, k2)]
    if any(d % 2 for d in diff):
        return False
    z = Q.solve([d // 2 for d in diff])
    return all(c.denominator == 1 for c in z)


def d_invariant(k: Sequence[int], Q: PlumbingMatrix) -> Fraction:
    return (square(k, Q) + Q.size) / 4


def lens_d_invariants(s: Slope) -> dict[Covector, Fraction]:
    """Correction terms of S^3_{-p/q}(U), keyed by the representatives in K."""
    Q = build_matrix(s)
    return {k: d_invariant(k, Q) for k in _tank_free(s.a)}


@lru_cache(maxsize=None)
def _os_recursion(p: int, q: int, i: int) -> Fraction:
    # d(S^3_{p/q}(U), i) for 0 < q < p, or p = 1.
    if p == 1:
        return Fraction(0)
    return (
        Fraction(-1, 4)
        + Fraction((2 * i + 1 - p - q) ** 2, 4 * p * q)
        - _os_recursion(q, p % q, i % q)
    )


def lens_d_recursion(p: int, q: int, i: int) -> Fraction:
    """Correction term of S^3_{-p/q}(U) in label i by the classical recursion.

    Independent of the plumbing computation; used as its cross-check.
    """
    if p < 1 or q < 1 or math.gcd(p, q) != 1:
        raise ValueError(f"invalid slope {p}/{q}")
    if not 0 <= i < p:
        raise IndexError(f"label {i} out of range 0..{p - 1}")
    if p == 1:
        return Fraction(0)
    return -_os_recursion(p, q % p, i)


def family_to_json(family: CovectorFamily, with_d: bool = True) -> dict:
    out: dict = {
        "slope": str(family.slope),
        "kind": family.kind.value,
        "covectors": [list(k) for k in family],
    }
    if with_d:
        Q = build_matrix(family.slope)
        out["d"] = [
            [",".join(map(str, k)), fraction_str(d_invariant(k, Q))] for k in family
        ]
    return out


def slope_for_word(a: Sequence[int]) -> Slope:
    v = hj_evaluate(a)
    s = hj_expand(v.numerator, v.denominator)
    if s.a != tuple(a):
        raise ValueError(f"{list(a)} is not a Hirzebruch-Jung word (a_i >= 2 for i >= 2)")
    return s
