import random

import pytest

from rationalsurgery import FormBlock, SearchBoundError, Slope, Verdict, hj_expand
from rationalsurgery import embedding as em
from rationalsurgery import plumbing as pl
from rationalsurgery.acceptance import naive_embedding_exists, small_blocks
from rationalsurgery.deficiency import Hypothesis, validate_vh

UNKNOT = validate_vh([0])


def block(qx, slope):
    return FormBlock(tuple(map(tuple, qx)), Slope.parse(slope))


def test_verify_examples():
    assert em.verify_embedding([[1, 0], [0, 1]], block([[-1]], "1"))
    v = em.verify_embedding([[1, 1, 1], [1, -1, 0], [0, 1, -1]], block([[-3]], "3/2"))
    assert v.ok and v.sigma == (1,)
    bad = em.verify_embedding([[1, 0], [0, 1]], block([[-1]], "2"))
    assert not bad.ok and "expected -2" in bad.reason


def test_verify_rejects_wrong_structure():
    # Gram matrix matches but (2) is not a changemaker vector
    v = em.verify_embedding([[2]], block([], "4"))
    assert not v.ok and "changemaker" in v.reason
    # y_2 with an entry of absolute value 2


def test_verify_is_signed_permutation_invariant():
    blk = block([[-3]], "3/2")
    A = em.search_embedding(blk).matrix
    rng = random.Random(7)
    for _ in range(20):
        perm = list(range(3))
        rng.shuffle(perm)
        signs = [rng.choice((1, -1)) for _ in range(3)]
        B = [[signs[c] * row[perm[c]] for c in range(3)] for row in A]
        assert em.verify_embedding(B, blk)
        assert em.normalize(B, blk) == em.normalize(A, blk)


def test_search_examples():
    good = em.search_embedding(block([[-3]], "3/2"))
    assert good.found and good.sigma == (1,)
    assert em.normalize(good.matrix, block([[-3]], "3/2")) == good.matrix
    assert not em.search_embedding(block([[-2]], "3/2")).found
    assert em.search_embedding(block([], "1")).matrix == [[1]]


def test_search_bound_is_explicit():
    blk = block([], "1/17")
    assert blk.rank == 17
    with pytest.raises(SearchBoundError):
        em.search_embedding(blk)
    with pytest.raises(SearchBoundError):
        em.search_embedding(block([[-3]], "3/2"), max_rank=2)


def test_normalize_idempotent():
    for blk in small_blocks(4, 3):
        res = em.search_embedding(blk)
        if res.found:
            once = em.normalize(res.matrix, blk)
            assert em.verify_embedding(once, blk)
            assert em.normalize(once, blk) == once


def test_normalize_rejects_unstructured():
    with pytest.raises(ValueError):
        em.normalize([[2]], block([], "4"))


def test_search_matches_naive_on_rank_four():
    for blk in small_blocks(4, 4):
        assert em.search_embedding(blk).found == naive_embedding_exists(blk)


def test_search_is_deterministic_and_worker_independent():
    blk = block([[-3, 1], [1, -2]], "5/2")
    runs = [em.search_embedding(blk, workers=w) for w in (1, 1, 3)]
    assert runs[0] == runs[1] == runs[2]


def test_obstruct_verdicts():
    ok = em.obstruct(UNKNOT, block([[-3]], "3/2"))
    assert ok.verdict is Verdict.CONSISTENT and ok.certificate is not None
    assert ok.hypothesis is Hypothesis.SATISFIED_EVEN
    assert em.obstruct(UNKNOT, block([[-2]], "3/2")).verdict is Verdict.OBSTRUCTED
    na = em.obstruct(validate_vh([2, 1]), block([[-3]], "1"))
    assert na.verdict is Verdict.NOT_APPLICABLE and na.search is None
    assumed = em.obstruct(None, block([[-2]], "3/2"))
    assert assumed.verdict is Verdict.OBSTRUCTED
    assert assumed.to_json()["hypothesis"] == "ASSUMED"


def test_verdict_json_excludes_time_by_default():
    v = em.obstruct(UNKNOT, block([[-3]], "3/2"))
    assert "seconds" not in v.to_json()
    assert "seconds" in v.to_json(timing=True)


def test_form_block_validation():
    with pytest.raises(ValueError):
        block([[-1, 1], [1, -1]], "2")
    with pytest.raises(ValueError):
        block([[-2, 1]], "2")


def test_unit_covectors_solve_their_equations():
    for text in ["3/2", "7/3", "5/2", "7/4"]:
        s = Slope.parse(text)
        for qx in ([], [[-3]], [[-2, 1], [1, -3]]):
            blk = block(qx, text)
            res = em.search_embedding(blk)
            if not res.found:
                continue
            W = res.matrix[blk.b:]
            for k in pl.enumerate_K_prime(s):
                alpha = em.unit_covector(W, k)
                if alpha is not None:
                    assert all(-sum(a * w for a, w in zip(alpha, row)) == ki for row, ki in zip(W, k))


def test_unit_covector_examples():
    blk = block([[-3]], "3/2")
    W = em.search_embedding(blk).matrix[1:]
    for k in pl.enumerate_K_prime(Slope.parse("3/2")):
        assert em.unit_covector(W, k) is not None
    assert em.unit_covector([[1, 1]], (1,)) is None
