"""Exact linear algebra on small dense integer/rational matrices."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = Sequence[Sequence[int]]


def det(M: Matrix) -> int:
    """Integer determinant by fraction-free (Bareiss) elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(map(int, row)) for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def leading_minors(M: Matrix) -> list[int]:
    return [det([row[:k] for row in M[:k]]) for k in range(1, len(M) + 1)]


def is_negative_definite(M: Matrix) -> bool:
    """Sylvester's criterion: the k-th leading minor has sign (-1)^k."""
    if any(len(row) != len(M) for row in M):
        return False
    if any(M[i][j] != M[j][i] for i in range(len(M)) for j in range(i)):
        return False
    return all((-1) ** k * m > 0 for k, m in enumerate(leading_minors(M), start=1))


def solve(M: Matrix, b: Sequence[int | Fraction]) -> list[Fraction]:
    """Solve M z = b exactly. Raises ZeroDivisionError if M is singular."""
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(M)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        A[col], A[piv] = A[piv], A[col]
        p = A[col][col]
        A[col] = [x / p for x in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return [A[i][n] for i in range(n)]


def gram(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Matrix of pairwise dot products of the given integer rows."""
    return [[sum(x * y for x, y in zip(u, v)) for v in rows] for u in rows]


def block_diag(A: Matrix, B: Matrix) -> list[list[int]]:
    a, b = len(A), len(B)
    out = [[0] * (a + b) for _ in range(a + b)]
    for i in range(a):
        out[i][:a] = list(A[i])
    for i in range(b):
        out[a + i][a:] = list(B[i])
    return out
