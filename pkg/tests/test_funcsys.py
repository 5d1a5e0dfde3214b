from fractions import Fraction
import threading

import pytest
from hypothesis import given, settings, strategies as st

from indepcert import (
    CandidatePool,
    FieldDescriptor,
    FunctionColumn,
    FunctionHandle,
    apply_transform,
    sample_matrix,
)
from indepcert.errors import DimensionMismatch, EmptyPool, EvaluationFailure, IndepCertError

from conftest import poly_column


def test_sample_matrix_examples(Q):
    col = poly_column([[1], [0, 1]], Q)
    assert sample_matrix(col, (0, 1)).rows() == [[1, 1], [0, 1]]
    F7 = FieldDescriptor.gf(7)
    sq = FunctionColumn.from_callables([lambda x: x * x], F7)
    assert sample_matrix(sq, (3,)).rows() == [[2]]
    empty = sample_matrix(col, ())
    assert empty.shape == (2, 0)


def test_sample_matrix_recheck(Q):
    col = poly_column([[1, 2], [0, 0, 1]], Q)
    sm = sample_matrix(col, (Fraction(1, 2), 3))
    assert sm.recheck()


def test_evaluation_failure_carries_index(Q):
    col = FunctionColumn.from_callables([lambda x: 1, lambda x: Fraction(1) / (x - 2)], Q)
    with pytest.raises(EvaluationFailure) as info:
        sample_matrix(col, (0, 1, 2))
    assert info.value.index == (1, 2)


def test_memoization_evaluates_once(Q):
    calls = []

    def f(x):
        calls.append(x)
        return x

    h = FunctionHandle(f, "f", Q)
    for _ in range(3):
        h(5)
    assert calls == [5]


def test_memo_is_safe_under_threads(Q):
    h = FunctionHandle(lambda x: x * x, "sq", Q)
    out = []

    def work():
        out.append([h(i) for i in range(200)])

    threads = [threading.Thread(target=work) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(r == out[0] for r in out)


def test_apply_transform_examples(Q):
    col = poly_column([[1], [0, 1]], Q)
    g = apply_transform([[1, 0], [0, 1]], col)
    pool = CandidatePool.grid(0, 1, 5, Q)
    assert sample_matrix(g, pool.points).rows() == sample_matrix(col, pool.points).rows()

    g = apply_transform([[1, 0], [-1, 1]], poly_column([[1], [1, 1]], Q))
    assert g[1](2) == 2

    F5 = FieldDescriptor.gf(5)
    g = apply_transform([[1, 0], [-2, 1]], poly_column([[0, 1], [0, 2]], F5))
    assert all(g.evaluate(1, p) == 0 for p in range(5))


def test_apply_transform_dimension(Q):
    with pytest.raises(DimensionMismatch):
        apply_transform([[1, 0]], poly_column([[1], [0, 1]], Q))


def test_pool_invariants(Q):
    with pytest.raises(EmptyPool):
        CandidatePool(())
    with pytest.raises(IndepCertError):
        CandidatePool((1, 2, 1))
    assert CandidatePool.grid(0, Fraction(1, 2), 3, Q).points == (0, Fraction(1, 2), 1)


def test_random_pool_needs_seed_and_is_reproducible():
    F101 = FieldDescriptor.gf(101)
    with pytest.raises(ValueError):
        CandidatePool.random(5, None, F101)
    a = CandidatePool.random(7, 42, F101)
    b = CandidatePool.random(7, 42, F101)
    assert a == b and len(a) == 7 and all(0 <= p < 101 for p in a)
    R = FieldDescriptor.approx()
    assert CandidatePool.random(4, 1, R, -1, 1) == CandidatePool.random(4, 1, R, -1, 1)


def test_product_pool():
    Q = FieldDescriptor.rational()
    pool = CandidatePool.product(CandidatePool.grid(0, 1, 2, Q), CandidatePool((7,)))
    assert pool.points == ((0, 7), (1, 7))


small = st.integers(-4, 4)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_transform_commutes_with_sampling(data):
    """(A f)(x) == A . f(x), exactly over Q and GF(p), closely over R."""
    fd = data.draw(st.sampled_from([FieldDescriptor.rational(), FieldDescriptor.gf(11),
                                    FieldDescriptor.approx()]))
    n = data.draw(st.integers(1, 4))
    coeffs = data.draw(st.lists(st.lists(small, min_size=1, max_size=4), min_size=n, max_size=n))
    A = data.draw(st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n))
    pts = data.draw(st.lists(st.integers(-5, 5), min_size=1, max_size=5))
    col = poly_column(coeffs, fd)
    lhs = sample_matrix(apply_transform(A, col), pts).rows()
    F = sample_matrix(col, pts).rows()
    rhs = [[sum(fd.coerce(A[i][k]) * F[k][j] for k in range(n)) for j in range(len(pts))]
           for i in range(n)]
    for i in range(n):
        for j in range(len(pts)):
            if fd.modulus:
                assert lhs[i][j] == rhs[i][j] % fd.modulus
            elif fd.is_exact:
                assert lhs[i][j] == rhs[i][j]
            else:
                assert abs(lhs[i][j] - rhs[i][j]) <= 1e-10 * max(1.0, abs(rhs[i][j]))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=1, max_size=6, unique=True), st.randoms())
def test_sampling_is_permutation_equivariant(pts, rnd):
    Q = FieldDescriptor.rational()
    col = poly_column([[1, 1], [0, 0, 1], [2, -1, 0, 1]], Q)
    perm = list(range(len(pts)))
    rnd.shuffle(perm)
    M = sample_matrix(col, pts).rows()
    P = sample_matrix(col, [pts[k] for k in perm]).rows()
    assert P == [[row[k] for k in perm] for row in M]
