"""Lattice embeddings -A A^t = Q_X + Q_W into the standard diagonal lattice.

Rows of A are ordered as the b rows for Q_X followed by the l rows for the
plumbing of the slope, named x, y_2, ..., y_l.  The structured form sought is

    x   = (s_r ... s_1  1  0 ...                 )
    y_2 = (0   ...  0  -1  1 ... 1  0 ...         )
    y_3 = (0   ...               -1  1 ... 1  0 ..)

with {s_i} a changemaker set and a_i nonzero entries in y_i; for q = 1 the
single row x must itself be a changemaker vector.  Everything is fixed only
up to signed permutation of the ambient coordinates.
"""
from __future__ import annotations

import enum
import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import isqrt
from typing import Iterator, Sequence

from .changemaker import enumerate_changemakers, is_changemaker
from .deficiency import Hypothesis, KnotData, vanishing_hypothesis
from .linalg import block_diag, gram, is_negative_definite
from .numeric import Slope
from .plumbing import PlumbingMatrix

DEFAULT_MAX_RANK = 16

Row = tuple[int, ...]


class SearchBoundError(ValueError):
    """The requested search exceeds the configured rank bound."""


@dataclass(frozen=True)
class FormBlock:
    qx: tuple[tuple[int, ...], ...]
    slope: Slope

    def __post_init__(self):
        qx = tuple(tuple(int(v) for v in row) for row in self.qx)
        object.__setattr__(self, "qx", qx)
        if any(len(row) != len(qx) for row in qx):
            raise ValueError("Q_X must be square")
        if qx and not is_negative_definite(qx):
            raise ValueError(f"Q_X = {[list(r) for r in qx]} is not symmetric negative definite")

    @property
    def b(self) -> int:
        return len(self.qx)

    @property
    def ell(self) -> int:
        return self.slope.length

    @property
    def rank(self) -> int:
        return self.b + self.ell

    @property
    def form(self) -> list[list[int]]:
        """Q_X + Q_W as one block-diagonal matrix."""
        return block_diag(self.qx, PlumbingMatrix(self.slope.a).rows)

    def gram_target(self) -> list[list[int]]:
        """Required value of A A^t."""
        return [[-v for v in row] for row in self.form]


@dataclass(frozen=True)
class Verification:
    ok: bool
    reason: str | None = None
    sigma: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.ok


def _support(v: Sequence[int]) -> set[int]:
    return {k for k, x in enumerate(v) if x}


def _structure(W: Sequence[Sequence[int]], s: Slope) -> Verification:
    """Check the row structure of the plumbing rows, sign/permutation invariantly."""
    x = W[0]
    if s.q == 1:
        sigma = tuple(sorted(abs(v) for v in x if v))
        if not is_changemaker(sigma):
            return Verification(False, f"last row {list(x)} is not a changemaker vector")
        return Verification(True, sigma=sigma)
    ys = W[1:]
    supports = [_support(y) for y in ys]
    for i, y in enumerate(ys):
        if any(abs(v) > 1 for v in y):
            return Verification(False, f"row y_{i + 2} has an entry outside {{-1, 0, 1}}")
        if len(supports[i]) != s.a[i + 1]:
            return Verification(
                False, f"row y_{i + 2} has {len(supports[i])} nonzero entries, expected {s.a[i + 1]}"
            )
    for i, j in itertools.combinations(range(len(ys)), 2):
        common = supports[i] & supports[j]
        if j == i + 1:
            if len(common) != 1:
                return Verification(False, f"rows y_{i + 2}, y_{j + 2} overlap in {len(common)} places")
            (c,) = common
            if ys[i][c] * ys[j][c] != -1:
                return Verification(False, f"rows y_{i + 2}, y_{j + 2} overlap with equal signs")
        elif common:
            return Verification(False, f"rows y_{i + 2}, y_{j + 2} are not disjoint")
    sx = _support(x)
    common = sx & supports[0]
    if len(common) != 1:
        return Verification(False, f"row x meets y_2 in {len(common)} places")
    (c0,) = common
    if x[c0] * ys[0][c0] != -1:
        return Verification(False, "row x meets y_2 with the wrong sign")
    for j in range(1, len(ys)):
        if sx & supports[j]:
            return Verification(False, f"row x meets y_{j + 2}")
    sigma = tuple(sorted(abs(x[k]) for k in sx - {c0}))
    if not is_changemaker(sigma):
        return Verification(False, f"sigma = {list(sigma)} is not a changemaker set")
    return Verification(True, sigma=sigma)


def verify_embedding(A: Sequence[Sequence[int]], block: FormBlock) -> Verification:
    """Check -A A^t == Q_X + Q_W entrywise, then the row structure."""
    N = block.rank
    if len(A) != N or any(len(row) != N for row in A):
        raise ValueError(f"A must be {N}x{N} for this block")
    G = gram(A)
    target = block.gram_target()
    for i in range(N):
        for j in range(i, N):
            if G[i][j] != target[i][j]:
                return Verification(
                    False, f"(-A A^t)[{i}][{j}] = {-G[i][j]}, expected {-target[i][j]}"
                )
    return _structure(A[block.b:], block.slope)


def normalize(A: Sequence[Sequence[int]], block: FormBlock) -> list[list[int]]:
    """Signed column permutation bringing a structured A into display form.

    Columns become: sigma entries (largest first), the shared 1 of x and y_2,
    then the y-chain left to right, then every remaining column.  Ties are
    broken by the column contents, so the map is idempotent.
    """
    check = _structure(A[block.b:], block.slope)
    if not check:
        raise ValueError(f"matrix does not have the required structure: {check.reason}")
    N = block.rank
    cols = [[row[c] for row in A] for c in range(N)]
    W = A[block.b:]
    s = block.slope

    def signed(c: int, sign: int) -> list[int]:
        return [sign * v for v in cols[c]]

    def first_nonzero_sign(c: int) -> int:
        return next((1 if v > 0 else -1 for v in cols[c] if v), 1)

    def desc(col: list[int]) -> tuple[int, ...]:
        return tuple(-v for v in col)

    order: list[list[int]] = []
    used: set[int] = set()
    x = W[0]
    if s.q == 1:
        sig = [signed(c, 1 if x[c] > 0 else -1) for c in sorted(_support(x))]
        sig.sort(key=lambda col: (-col[block.b], desc(col)))
        order += sig
        used |= _support(x)
    else:
        ys = W[1:]
        sx, sy = _support(x), [_support(y) for y in ys]
        (c0,) = sx & sy[0]
        sig = [signed(c, 1 if x[c] > 0 else -1) for c in sorted(sx - {c0})]
        sig.sort(key=lambda col: (-col[block.b], desc(col)))
        order += sig
        order.append(signed(c0, 1 if x[c0] > 0 else -1))
        used |= sx
        for i, y in enumerate(ys):
            nxt = sy[i] & sy[i + 1] if i + 1 < len(ys) else set()
            private = sorted(sy[i] - used - nxt)
            order += sorted((signed(c, y[c]) for c in private), key=desc)
            used |= set(private)
            for c in nxt:
                order.append(signed(c, y[c]))
                used.add(c)
    rest = [signed(c, first_nonzero_sign(c)) for c in range(N) if c not in used]
    order += sorted(rest, key=desc)
    return [[order[c][r] for c in range(N)] for r in range(N)]


def plumbing_rows(sigma: Sequence[int], s: Slope, N: int) -> list[Row]:
    """The x, y_2, ..., y_l rows in display form for a given sigma (sorted
    non-decreasing), padded with zeros to N columns."""
    sig = sorted(sigma, reverse=True)
    if s.q == 1:
        return [tuple(sig + [0] * (N - len(sig)))]
    rows = []
    c0 = len(sig)
    x = sig + [1]
    rows.append(tuple(x + [0] * (N - len(x))))
    start = c0
    for w in s.a[1:]:
        y = [0] * N
        y[start] = -1
        for c in range(start + 1, start + w):
            y[c] = 1
        rows.append(tuple(y))
        start += w - 1
    return rows


def _columns_used(s: Slope) -> int:
    return 0 if s.q == 1 else 1 + sum(w - 1 for w in s.a[1:])


def _sigma_norm(s: Slope) -> int:
    return s.p if s.q == 1 else s.n - 1


def sigma_candidates(block: FormBlock) -> list[tuple[int, ...]]:
    s = block.slope
    free = block.rank - _columns_used(s)
    if free < 0:
        return []
    return enumerate_changemakers(_sigma_norm(s), free)


class _RowSearch:
    """Backtracking over the Q_X rows once the plumbing rows are fixed."""

    def __init__(self, qx: Sequence[Sequence[int]], fixed: list[Row], N: int):
        self.qx = qx
        self.fixed = fixed
        self.N = N
        self.nodes = 0

    def solutions(self) -> Iterator[list[Row]]:
        yield from self._rows(0, list(self.fixed), [])

    def _rows(self, k: int, placed: list[Row], built: list[Row]) -> Iterator[list[Row]]:
        if k == len(self.qx):
            yield list(built)
            return
        targets = [0] * len(self.fixed) + [-self.qx[k][l] for l in range(k)]
        for u in self._vectors(-self.qx[k][k], placed, targets):
            built.append(u)
            placed.append(u)
            yield from self._rows(k + 1, placed, built)
            placed.pop()
            built.pop()

    def _vectors(self, norm: int, placed: list[Row], targets: list[int]) -> Iterator[Row]:
        N = self.N
        # columns with identical content in every placed row are interchangeable;
        # all-zero columns may also be negated
        content = [tuple(row[c] for row in placed) for c in range(N)]
        prev_same: list[int] = []
        seen: dict[tuple[int, ...], int] = {}
        for c in range(N):
            prev_same.append(seen.get(content[c], -1))
            seen[content[c]] = c
        nonneg = [not any(col) for col in content]
        # suffix squared norms of the placed rows, for Cauchy-Schwarz pruning
        m = len(placed)
        suffix = [[0] * (N + 1) for _ in range(m)]
        for t, row in enumerate(placed):
            for c in range(N - 1, -1, -1):
                suffix[t][c] = suffix[t][c + 1] + row[c] * row[c]
        u = [0] * N
        dots = [0] * m

        def rec(c: int, rem: int) -> Iterator[Row]:
            self.nodes += 1
            if c == N:
                if rem == 0 and dots == targets:
                    yield tuple(u)
                return
            hi = isqrt(rem)
            if prev_same[c] >= 0:
                hi = min(hi, u[prev_same[c]])
            lo = 0 if nonneg[c] else -isqrt(rem)
            for v in range(hi, lo - 1, -1):
                r2 = rem - v * v
                ok = True
                for t in range(m):
                    dots[t] += v * placed[t][c]
                for t in range(m):
                    gap = targets[t] - dots[t]
                    if gap * gap > r2 * suffix[t][c + 1]:
                        ok = False
                        break
                if ok:
                    u[c] = v
                    yield from rec(c + 1, r2)
                    u[c] = 0
                for t in range(m):
                    dots[t] -= v * placed[t][c]

        yield from rec(0, norm)


@dataclass
class SearchResult:
    matrix: list[list[int]] | None
    sigma: tuple[int, ...] | None
    nodes: int
    candidates_tried: int = 0

    @property
    def found(self) -> bool:
        return self.matrix is not None


def _search_sigma(args) -> tuple[list[list[int]] | None, int]:
    qx, slope, N, sigma = args
    fixed = plumbing_rows(sigma, slope, N)
    rs = _RowSearch(qx, fixed, N)
    for rows in rs.solutions():
        return [list(r) for r in rows] + [list(r) for r in fixed], rs.nodes
    return None, rs.nodes


def search_embedding(
    block: FormBlock, max_rank: int = DEFAULT_MAX_RANK, workers: int = 1
) -> SearchResult:
    """Exhaustive search for a structured embedding.

    The plumbing rows are placed in display form for each changemaker
    candidate sigma (in enumeration order), then the Q_X rows are found by
    backtracking with entries tried from largest to smallest.  The first
    solution in that order is returned; parallel runs split over sigma and
    return the same solution and node count as a serial run.
    """
    N = block.rank
    if N > max_rank:
        raise SearchBoundError(f"rank {N} exceeds the search bound {max_rank}")
    candidates = sigma_candidates(block)
    jobs = [(block.qx, block.slope, N, sigma) for sigma in candidates]
    nodes = 0
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_search_sigma, jobs))
    else:
        results = (_search_sigma(job) for job in jobs)
    for tried, ((matrix, n), sigma) in enumerate(zip(results, candidates), start=1):
        nodes += n
        if matrix is not None:
            return SearchResult(matrix, sigma, nodes, tried)
    return SearchResult(None, None, nodes, len(candidates))


class Verdict(enum.Enum):
    CONSISTENT = "CONSISTENT"
    OBSTRUCTED = "OBSTRUCTED"
    NOT_APPLICABLE = "NOT_APPLICABLE"


@dataclass
class ObstructionVerdict:
    verdict: Verdict
    hypothesis: Hypothesis | None
    vanishing_count: int | None
    search: SearchResult | None
    seconds: float = field(default=0.0, compare=False)

    @property
    def embeddable(self) -> bool | None:
        return None if self.search is None else self.search.found

    @property
    def certificate(self) -> list[list[int]] | None:
        return None if self.search is None else self.search.matrix

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "verdict": self.verdict.value,
            "hypothesis": "ASSUMED" if self.hypothesis is None else self.hypothesis.value,
            "vanishing_count": self.vanishing_count,
            "embeddable": self.embeddable,
            "certificate": self.certificate,
            "sigma": None if self.search is None or self.search.sigma is None else list(self.search.sigma),
            "nodes": None if self.search is None else self.search.nodes,
        }
        if timing:
            out["seconds"] = round(self.seconds, 6)
        return out


def obstruct(
    data: KnotData | None,
    block: FormBlock,
    max_rank: int = DEFAULT_MAX_RANK,
    workers: int = 1,
) -> ObstructionVerdict:
    """Apply the changemaker obstruction to Y = S^3_{-p/q}(C) bounding X.

    With ``data`` None the vanishing hypothesis is assumed and the verdict is
    conditional on it.  OBSTRUCTED means the hypothesis holds (or is assumed)
    and no structured embedding exists.
    """
    t0 = time.perf_counter()
    hyp = count = None
    if data is not None:
        hyp, count = vanishing_hypothesis(data, block.slope)
        if not hyp.satisfied:
            return ObstructionVerdict(Verdict.NOT_APPLICABLE, hyp, count, None, time.perf_counter() - t0)
    result = search_embedding(block, max_rank=max_rank, workers=workers)
    if result.found:
        assert verify_embedding(result.matrix, block), "search returned an invalid certificate"
        verdict = Verdict.CONSISTENT
    else:
        verdict = Verdict.OBSTRUCTED
    return ObstructionVerdict(verdict, hyp, count, result, time.perf_counter() - t0)


def unit_covector(W: Sequence[Sequence[int]], K: Sequence[int]) -> tuple[int, ...] | None:
    """Some alpha in {+1, -1}^N with -<alpha, w_i> = K_i for every row w_i of W.

    A maximiser whose deficiency vanishes is always cut out this way by the
    plumbing rows of an embedding, so a None here refutes the certificate for
    that Spin^c structure.
    """
    N = len(W[0])
    m = len(W)
    # suffix sums of |w_i| bound how far each partial evaluation can still move
    reach = [[0] * (N + 1) for _ in range(m)]
    for i, w in enumerate(W):
        for c in range(N - 1, -1, -1):
            reach[i][c] = reach[i][c + 1] + abs(w[c])
    alpha = [0] * N
    acc = [0] * m

    def rec(c: int) -> bool:
        if c == N:
            return all(acc[i] == -K[i] for i in range(m))
        for sgn in (1, -1):
            for i in range(m):
                acc[i] += sgn * W[i][c]
            if all(abs(-K[i] - acc[i]) <= reach[i][c + 1] for i in range(m)):
                alpha[c] = sgn
                if rec(c + 1):
                    return True
            for i in range(m):
                acc[i] -= sgn * W[i][c]
        return False

    return tuple(alpha) if rec(0) else None
