"""Release criteria, shared by ``rationalsurgery selftest`` and the test suite.

Each criterion returns a :class:`Result`.  The oracles here (subset-sum brute
force, naive matrix enumeration, the lens-space recursion) share no code with
the paths they check beyond the structural verifier.
"""
from __future__ import annotations

import itertools
import math
import random
import time
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator

import numpy as np

from . import changemaker as cm
from . import deficiency as dm
from . import embedding as em
from . import plumbing as pl
from .linalg import is_negative_definite
from .numeric import Slope, hj_expand


@dataclass
class Result:
    name: str
    passed: bool
    detail: str
    seconds: float
    limit: float | None = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        budget = f" (limit {self.limit:.0f}s)" if self.limit else ""
        return f"[{status}] {self.name}: {self.detail} [{self.seconds:.1f}s{budget}]"


def slopes(max_p: int, min_p: int = 1) -> Iterator[Slope]:
    """Every coprime p/q with min_p <= p <= max_p and 1 <= q <= 2p.

    Each residue of q mod p appears twice, once with q < p and once with q > p,
    so every lens space S^3_{-p/q}(U) is met through two plumbings.
    """
    for p in range(min_p, max_p + 1):
        for q in range(1, 2 * p + 1):
            if math.gcd(p, q) == 1:
                yield hj_expand(p, q)


def random_knot_data(rng: random.Random, max_len: int = 8, max_entry: int = 10) -> dm.KnotData:
    V = sorted((rng.randint(0, max_entry) for _ in range(rng.randint(1, max_len))), reverse=True)
    return dm.validate_vh(V)


def random_corpus(count: int = 200, max_p: int = 80, seed: int = 20140101):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        data = random_knot_data(rng)
        while True:
            p, q = rng.randint(1, max_p), rng.randint(1, 2 * max_p)
            if math.gcd(p, q) == 1:
                break
        out.append((data, hj_expand(p, q)))
    return out


def _timed(name: str, limit: float | None, body: Callable[[], tuple[bool, str]]) -> Result:
    t0 = time.perf_counter()
    passed, detail = body()
    dt = time.perf_counter() - t0
    if limit is not None and dt > limit:
        passed = False
        detail += f"; exceeded time limit {limit:.0f}s"
    return Result(name, passed, detail, dt, limit)


# --- 1 --------------------------------------------------------------------

def covector_count(max_p: int = 60) -> Result:
    def body():
        bad, n = [], 0
        for s in slopes(max_p, min_p=2):
            n += 1
            if len(pl.enumerate_K(s)) != s.p:
                bad.append(str(s))
        return not bad, f"|K(p/q)| = p on {n} slopes" + (f"; failures {bad[:5]}" if bad else "")

    return _timed("1 covector count", 60, body)


# --- 2 --------------------------------------------------------------------

def path_classification(max_p: int = 60, max_product: int = 10**5) -> Result:
    def body():
        n_slopes = n_cov = 0
        bad = []
        for s in slopes(max_p):
            if math.prod(s.a) > max_product:
                continue
            n_slopes += 1
            for k in pl.initial_covectors(s.a):
                n_cov += 1
                maximising = pl.classify_path(k, s.a) is pl.PathKind.MAXIMISING
                if maximising == pl.has_full_tank(k, s.a):
                    bad.append((str(s), k))
        return not bad, (
            f"maximising <=> no full tank on {n_cov} covectors over {n_slopes} slopes"
            + (f"; failures {bad[:3]}" if bad else "")
        )

    return _timed("2 path classification", 120, body)


# --- 3 --------------------------------------------------------------------

def d_invariant_oracle(max_p: int = 50) -> Result:
    def body():
        spot = sorted(pl.lens_d_invariants(hj_expand(2, 1)).values())
        if spot != sorted([pl.Fraction(1, 4), pl.Fraction(-1, 4)]):
            return False, f"spot value 2/1 gave {spot}"
        bad, n = [], 0
        for s in slopes(max_p):
            n += 1
            plumbed = Counter(pl.lens_d_invariants(s).values())
            recursed = Counter(pl.lens_d_recursion(s.p, s.q, i) for i in range(s.p))
            if plumbed != recursed:
                bad.append(str(s))
        return not bad, f"plumbing d = recursion d on {n} slopes" + (f"; failures {bad[:5]}" if bad else "")

    return _timed("3 d-invariant oracle", 60, body)


# --- 4, 5 -----------------------------------------------------------------

def sum_identity(count: int = 200) -> Result:
    def body():
        bad = [(d.V, str(s)) for d, s in random_corpus(count) if not dm.sum_identity_check(d, s).holds]
        return not bad, f"sum identity on {count} random (V, slope) pairs" + (f"; failures {bad[:3]}" if bad else "")

    return _timed("4 sum identity", 30, body)


def multiset_symmetry(count: int = 200) -> Result:
    def body():
        d, s = dm.validate_vh([1, 0]), hj_expand(7, 3)
        w = dm.symmetry_check(d, s)
        table = dm.deficiency_rational(d, s)
        witness_ok = (
            w.holds
            and table.values == (2, 2, 2, 0, 0, 0, 0)
            and table.integral_values == (2, 0, 0)
            and (w.copies, w.removed_count, w.removed_value) == (3, 2, 0)
        )
        if not witness_ok:
            return False, f"hand witness V=(1,0), 7/3 failed: {w}"
        bad = [(d.V, str(s)) for d, s in random_corpus(count) if not dm.symmetry_check(d, s).holds]
        return not bad, (
            f"multiset symmetry on witness + {count} random pairs"
            + (f"; failures {bad[:3]}" if bad else "")
        )

    return _timed("5 multiset symmetry", 30, body)


# --- 6 --------------------------------------------------------------------

def fibre_census(max_p: int = 60) -> Result:
    def body():
        bad, n = [], 0
        for s in slopes(max_p):
            n += 1
            family = pl.enumerate_K_prime(s)
            if len(family) != s.p or pl.fibre_census(family) != pl.expected_fibre_census(s):
                bad.append(str(s))
        return not bad, f"K' fibre census on {n} slopes" + (f"; failures {bad[:5]}" if bad else "")

    return _timed("6 K' fibre census", 60, body)


# --- 7 --------------------------------------------------------------------

def subset_sums_cover(sigma) -> bool:
    """Brute force: every value in 0..sum is a subset sum."""
    reachable = {0}
    for c in sigma:
        reachable |= {v + c for v in reachable}
    return set(range(sum(sigma) + 1)) <= reachable


def changemaker_equivalence(max_len: int = 8, max_entry: int = 12) -> Result:
    def body():
        n, bad = 0, []
        for length in range(max_len + 1):
            for sigma in itertools.combinations_with_replacement(range(max_entry + 1), length):
                n += 1
                if cm.is_changemaker(sigma) != subset_sums_cover(sigma):
                    bad.append(sigma)
        return not bad, f"sorted criterion = subset sums on {n} vectors" + (f"; failures {bad[:3]}" if bad else "")

    return _timed("7 changemaker equivalence", 60, body)


# --- 8 --------------------------------------------------------------------

@lru_cache(maxsize=None)
def _shell(N: int, norm: int) -> np.ndarray:
    s = math.isqrt(norm)
    pts = np.array(list(itertools.product(range(-s, s + 1), repeat=N)), dtype=np.int64)
    return pts[(pts * pts).sum(axis=1) == norm]


def naive_embedding_exists(block: em.FormBlock) -> bool:
    """Enumerate integer matrices A with the right Gram matrix row by row and
    test each complete one with the structural verifier.

    Only lex-leader representatives are kept: columns lexicographically
    non-increasing with positive first nonzero entry.  Sorting sign-normalised
    columns brings any A to that form, and signed column permutations preserve
    both the Gram matrix and the row structure.
    """
    N = block.rank
    G = np.array(block.gram_target(), dtype=np.int64)
    A = np.zeros((N, N), dtype=np.int64)

    def admissible(i: int, cands: np.ndarray) -> np.ndarray:
        mask = np.ones(len(cands), dtype=bool)
        prefix = A[:i]
        for c in range(N):
            col = prefix[:, c]
            if not col.any():
                mask &= cands[:, c] >= 0
            if c + 1 < N and np.array_equal(col, prefix[:, c + 1]):
                mask &= cands[:, c] >= cands[:, c + 1]
        return cands[mask]

    def rec(i: int) -> bool:
        cands = _shell(N, int(G[i, i]))
        if i:
            cands = cands[np.all(cands @ A[:i].T == G[i, :i], axis=1)]
        for v in admissible(i, cands):
            A[i] = v
            if i == N - 1:
                if em.verify_embedding(A.tolist(), block).ok:
                    return True
            elif rec(i + 1):
                return True
        A[i] = 0
        return False

    return rec(0)


def hj_words(length: int, max_a: int) -> Iterator[tuple[int, ...]]:
    for a1 in range(1, max_a + 1):
        for rest in itertools.product(range(2, max_a + 1), repeat=length - 1):
            yield (a1,) + rest


def chain_forms(b: int, max_w: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Negative definite linear-chain forms with weights -1..-max_w."""
    for ws in itertools.product(range(1, max_w + 1), repeat=b):
        M = [[0] * b for _ in range(b)]
        for i, w in enumerate(ws):
            M[i][i] = -w
            if i + 1 < b:
                M[i][i + 1] = M[i + 1][i] = 1
        if not M or is_negative_definite(M):
            yield tuple(map(tuple, M))


def small_blocks(max_rank: int = 6, max_a: int = 4) -> Iterator[em.FormBlock]:
    for N in range(1, max_rank + 1):
        for b in range(N):
            for a in hj_words(N - b, max_a):
                s = pl.slope_for_word(a)
                for qx in chain_forms(b, max_a):
                    yield em.FormBlock(qx, s)


def embedding_end_to_end(max_rank: int = 6, max_a: int = 4) -> Result:
    def body():
        unknot = dm.validate_vh([0])
        s = Slope.parse("3/2")
        good = em.obstruct(unknot, em.FormBlock(((-3,),), s))
        if good.verdict is not em.Verdict.CONSISTENT or good.search.sigma != (1,):
            return False, f"Q_X=(-3), 3/2 gave {good.verdict.value}"
        if not em.verify_embedding(good.certificate, em.FormBlock(((-3,),), s)):
            return False, "Q_X=(-3), 3/2 certificate does not verify"
        bad_case = em.obstruct(unknot, em.FormBlock(((-2,),), s))
        if bad_case.verdict is not em.Verdict.OBSTRUCTED:
            return False, f"Q_X=(-2), 3/2 gave {bad_case.verdict.value}"
        n = found = 0
        bad = []
        for block in small_blocks(max_rank, max_a):
            n += 1
            result = em.search_embedding(block)
            if result.found:
                found += 1
                if not em.verify_embedding(result.matrix, block):
                    bad.append(("unverified", block))
                    continue
            if result.found != naive_embedding_exists(block):
                bad.append(("disagree", block))
        return not bad, (
            f"search = naive enumeration on {n} blocks of rank <= {max_rank} ({found} embeddable)"
            + (f"; failures {bad[:3]}" if bad else "")
        )

    return _timed("8 embedding end-to-end", 120, body)


# --- 9 --------------------------------------------------------------------

def unknot_sanity(max_p: int = 60) -> Result:
    def body():
        unknot = dm.validate_vh([0])
        bad, n = [], 0
        for s in slopes(max_p):
            n += 1
            table = dm.deficiency_rational(unknot, s)
            hyp, count = dm.vanishing_hypothesis(unknot, s)
            want = dm.Hypothesis.SATISFIED_ODD if s.n % 2 else dm.Hypothesis.SATISFIED_EVEN
            if any(table.values) or any(table.integral_values) or hyp is not want or count != s.p:
                bad.append(str(s))
        return not bad, f"unknot deficiencies vanish, hypothesis by parity on {n} slopes" + (
            f"; failures {bad[:5]}" if bad else ""
        )

    return _timed("9 unknot sanity", None, body)


CRITERIA: list[Callable[[], Result]] = [
    covector_count,
    path_classification,
    d_invariant_oracle,
    sum_identity,
    multiset_symmetry,
    fibre_census,
    changemaker_equivalence,
    embedding_end_to_end,
    unknot_sanity,
]


def run_all(echo: bool = True) -> list[Result]:
    results = []
    for criterion in CRITERIA:
        r = criterion()
        if echo:
            print(r.line(), flush=True)
        results.append(r)
    return results
