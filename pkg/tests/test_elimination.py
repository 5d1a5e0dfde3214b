from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from indepcert import (
    CandidatePool,
    DependenceWitness,
    FieldDescriptor,
    FunctionColumn,
    IndependenceCertificate,
    apply_transform,
    certify_independence,
    elimination_step,
    find_pivot,
    sample_matrix,
    verify_certificate,
    witness_check,
)
from indepcert.elimination import certificate_residual, trace_matrix
from indepcert.errors import DimensionMismatch, EmptyPool, PivotIsZero

from conftest import cofactor_det, full_sample, horner, oracle_rank, poly_column, reduce_to

VANDERMONDE = [[1], [0, 1], [0, 0, 1]]


def naive_matmul(A, B):
    return [[sum(Fraction(A[i][k]) * Fraction(B[k][j]) for k in range(len(B)))
             for j in range(len(B[0]))] for i in range(len(A))]


def test_find_pivot_rules(Q):
    pool = CandidatePool((0, 1, 2))
    x = poly_column([[0, 1]], Q)[0]
    assert find_pivot(x, pool) == 1
    R = FieldDescriptor.approx()
    xr = poly_column([[0, 1]], R)[0]
    assert find_pivot(xr, CandidatePool((0.0, 1.0, 2.0))) == 2.0
    zero = poly_column([[0]], Q)[0]
    assert find_pivot(zero, pool) is None


def test_elimination_step_examples(Q):
    M, tail = elimination_step(poly_column([[1], [1, 1]], Q), 0)
    assert M == [[1, 0], [-1, 1]]
    assert len(tail) == 1 and tail.evaluate(0, 0) == 0
    assert [tail.evaluate(0, p) for p in range(4)] == [0, 1, 2, 3]

    F5 = FieldDescriptor.gf(5)
    M, tail = elimination_step(poly_column([[0, 1], [0, 2]], F5), 1)
    assert M[1][0] == 3
    assert all(tail.evaluate(0, p) == 0 for p in range(5))

    M, tail = elimination_step(poly_column(VANDERMONDE, Q), 0)
    assert [M[1][0], M[2][0]] == [0, 0]
    assert [[tail.evaluate(i, p) for p in range(3)] for i in range(2)] == [[0, 1, 2], [0, 1, 4]]


def test_elimination_step_matches_apply_transform(Q):
    col = poly_column([[2, 1], [1, 0, 3], [0, -1, 1]], Q)
    M, tail = elimination_step(col, 1)
    g = apply_transform(M, col)
    pts = range(-3, 4)
    assert sample_matrix(tail, pts).rows() == sample_matrix(g, pts).rows()[1:]


def test_elimination_step_rejects_zero_pivot(Q):
    with pytest.raises(PivotIsZero):
        elimination_step(poly_column([[0, 1], [1]], Q), 0)
    with pytest.raises(DimensionMismatch):
        elimination_step(poly_column([[1]], Q), 0)


def test_vandermonde_certificate(Q):
    col = poly_column(VANDERMONDE, Q)
    cert = certify_independence(col, CandidatePool((0, 1, 2)))
    assert isinstance(cert, IndependenceCertificate)
    assert cert.points == (0, 1, 2)
    assert [list(r) for r in cert.U] == [[1, 1, 1], [0, 1, 2], [0, 0, 2]]
    assert [list(r) for r in cert.A] == [[1, 0, 0], [0, 1, 0], [0, -1, 1]]
    # independent oracle: plain matrix multiply of A and the hand-evaluated samples
    F = [[horner(cs, x) for x in cert.points] for cs in VANDERMONDE]
    assert naive_matmul(cert.A, F) == [list(r) for r in cert.U]
    assert verify_certificate(col, cert)


def test_proportional_witness(Q):
    col = poly_column([[0, 1], [0, 2]], Q)
    pool = CandidatePool((0, 1, 2))
    w = certify_independence(col, pool)
    assert isinstance(w, DependenceWitness)
    assert w.beta == (-2, 1)
    assert all(-2 * x + 2 * x == 0 for x in pool)
    assert witness_check(col, w, pool)


def test_zero_function_witness(Q):
    w = certify_independence(poly_column([[0]], Q), CandidatePool((0, 1)))
    assert w.beta == (1,)


def test_empty_pool_rejected(Q):
    class Empty:
        def __len__(self):
            return 0

    with pytest.raises(EmptyPool):
        certify_independence(poly_column([[1]], Q), Empty())


def test_verify_rejects_tampering(Q):
    col = poly_column(VANDERMONDE, Q)
    cert = certify_independence(col, CandidatePool((0, 1, 2)))
    U = [list(r) for r in cert.U]
    U[2][2] = Fraction(0)
    bad = IndependenceCertificate(cert.points, cert.A, tuple(map(tuple, U)), Q)
    assert not verify_certificate(col, bad)
    A = [list(r) for r in cert.A]
    A[0][1] = Fraction(1)
    bad = IndependenceCertificate(cert.points, tuple(map(tuple, A)), cert.U, Q)
    assert not verify_certificate(col, bad)
    bad = IndependenceCertificate((0, 1, 3), cert.A, cert.U, Q)
    assert not verify_certificate(col, bad)
    with pytest.raises(DimensionMismatch):
        verify_certificate(poly_column([[1]], Q), cert)


def test_witness_check_examples(Q):
    from indepcert import DependenceWitness as W
    assert witness_check(poly_column([[0, 1], [0, 2]], Q), W((-2, 1), Q), CandidatePool((0, 1, 2)))
    assert not witness_check(poly_column([[1], [0, 1]], Q), W((1, 0), Q), CandidatePool((0, 1)))
    assert not witness_check(poly_column([[0, 1], [0, 2]], Q), W((0, 0), Q), CandidatePool((0, 1)))
    with pytest.raises(DimensionMismatch):
        witness_check(poly_column([[1]], Q), W((1, 0), Q), CandidatePool((0,)))


def test_points_may_repeat_across_levels_but_never_needed(Q):
    # the used pivot point stays in the pool for deeper levels
    col = poly_column([[1], [1]], Q)
    w = certify_independence(col, CandidatePool((5,)))
    assert w.beta == (-1, 1)


def test_approx_monomials_partial_pivoting():
    R = FieldDescriptor.approx()
    col = poly_column([[0] * k + [1] for k in range(6)], R)
    pool = CandidatePool(tuple(float(x) for x in range(6)))
    cert = certify_independence(col, pool)
    assert isinstance(cert, IndependenceCertificate)
    # partial pivoting: every pivot is the largest reduced value on the pool
    for step in cert.trace:
        lead_vals = [abs(v) for v in step_values(col, cert, step.pivot_index, pool)]
        assert abs(step.pivot_value) == max(lead_vals)
    assert certificate_residual(col, cert) <= 1e-12


def step_values(col, cert, k, pool):
    A = cert.A
    return [sum(A[k][j] * col.evaluate(j, p) for j in range(len(col))) for p in pool]


def test_approx_detects_dependence():
    R = FieldDescriptor.approx()
    col = FunctionColumn.from_callables(
        [lambda x: x, lambda x: x * x, lambda x: 0.1 * x + 0.3 * x * x], R)
    out = certify_independence(col, CandidatePool(tuple(float(x) for x in range(8))))
    assert isinstance(out, DependenceWitness)
    assert witness_check(col, out, CandidatePool(tuple(float(x) for x in range(8))))


# -- properties ------------------------------------------------------------

fields = st.sampled_from([FieldDescriptor.rational(), FieldDescriptor.gf(2),
                          FieldDescriptor.gf(5), FieldDescriptor.gf(101)])


@st.composite
def systems(draw):
    fd = draw(fields)
    n = draw(st.integers(1, 5))
    deg = draw(st.integers(0, 4))
    coeffs = draw(st.lists(st.lists(st.integers(-3, 3), min_size=deg + 1, max_size=deg + 1),
                           min_size=n, max_size=n))
    bound = fd.modulus or 13
    pts = draw(st.lists(st.integers(0, bound - 1), min_size=1, max_size=min(10, bound), unique=True))
    return fd, coeffs, pts


@settings(max_examples=200, deadline=None)
@given(systems())
def test_completeness_and_soundness(system):
    fd, coeffs, pts = system
    col = poly_column(coeffs, fd)
    pool = CandidatePool(tuple(reduce_to(fd, p) for p in pts))
    out = certify_independence(col, pool)
    full_rank = oracle_rank(full_sample(coeffs, pool.points, fd), fd) == len(coeffs)
    assert isinstance(out, IndependenceCertificate) == full_rank
    if isinstance(out, IndependenceCertificate):
        assert verify_certificate(col, out)
        assert set(out.points) <= set(pool.points)
        F = sample_matrix(col, out.points).rows()
        assert cofactor_det(F, fd) == out.determinant() != 0
        assert [list(r) for r in trace_matrix(out.trace, len(col), fd)] == [list(r) for r in out.A]
    else:
        assert witness_check(col, out, pool)


@settings(max_examples=80, deadline=None)
@given(systems())
def test_tail_vanishes_at_pivot(system):
    fd, coeffs, pts = system
    col = poly_column(coeffs, fd)
    pool = CandidatePool(tuple(reduce_to(fd, p) for p in pts))
    current = col
    while len(current) >= 2:
        x = find_pivot(current[0], pool)
        if x is None:
            break
        _, current = elimination_step(current, x)
        assert all(current.evaluate(i, x) == 0 for i in range(len(current)))
