"""Generalized forward elimination on a column of functions.

Instead of eliminating entries of a fixed matrix, each step picks a point
where the leading function is nonzero and subtracts multiples of it from
the remaining functions so that they all vanish at that point.  Recursing
on the remaining functions yields points ``x`` and a unit lower triangular
``A`` such that ``A @ f(x)`` is upper triangular with a nonzero diagonal.
That triple certifies that ``f(x)`` is nonsingular, hence that the
functions are linearly independent.  If some reduced function vanishes on
the whole pool, the corresponding row of the accumulated transform is a
dependence relation instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg
from .errors import DimensionMismatch, EmptyPool, EvaluationFailure, PivotIsZero
from .field import FieldDescriptor
from .funcsys import (
    CandidatePool,
    FunctionColumn,
    FunctionHandle,
    linear_combination,
    sample_matrix,
)


@dataclass(frozen=True)
class EliminationStep:
    """One level of the recursion.

    ``multipliers`` are the entries ``-g_i(x)/g_1(x)`` placed below the
    diagonal in the first column of the step matrix.
    """

    pivot_index: int
    pivot_point: object
    pivot_value: object
    multipliers: tuple


@dataclass(frozen=True)
class IndependenceCertificate:
    points: tuple
    A: tuple
    U: tuple
    field: FieldDescriptor
    trace: tuple = field(default=(), compare=False, repr=False)

    @property
    def n(self):
        return len(self.points)

    def determinant(self):
        """``det f(points)``, which equals the product of ``U``'s diagonal since ``det A = 1``."""
        fd = self.field
        d = fd.one
        for i in range(self.n):
            d = fd.mul(d, self.U[i][i])
        return d


@dataclass(frozen=True)
class DependenceWitness:
    """Coefficients ``beta`` with ``sum(beta_i f_i)`` vanishing on the pool.

    ``depth`` is the elimination level at which the reduced function was
    found to vanish; it only matters for diagnostics.
    """

    beta: tuple
    field: FieldDescriptor
    depth: int = field(default=0, compare=False)
    trace: tuple = field(default=(), compare=False, repr=False)


def _values_on(fn, pool):
    out = []
    for j, p in enumerate(pool):
        try:
            out.append(fn(p))
        except EvaluationFailure as exc:
            raise EvaluationFailure(str(exc), index=(None, j)) from exc
    return out


def _choose_pivot(values, fd, scale):
    """Index of the pivot among ``values`` or ``None``.

    Exact fields take the first nonzero entry; approximate reals take the
    entry of largest magnitude if it is not effectively zero.
    """
    if fd.is_exact:
        for j, v in enumerate(values):
            if v != 0:
                return j
        return None
    best = max(range(len(values)), key=lambda j: abs(values[j]))
    if fd.is_zero(values[best], scale):
        return None
    return best


def find_pivot(fn: FunctionHandle, pool: CandidatePool, fd: FieldDescriptor | None = None,
               scale=None):
    """Point of ``pool`` where ``fn`` is usable as a pivot, or ``None``.

    ``fd`` defaults to the handle's own field; ``scale`` defaults to the
    largest magnitude of ``fn`` on the pool.
    """
    fd = fd or fn.field
    if fd is None:
        raise ValueError("no field given and the handle carries none")
    if len(pool) == 0:
        raise EmptyPool("cannot search an empty pool")
    values = [fd.coerce(v) for v in _values_on(fn, pool)]
    if scale is None:
        scale = max(fd.magnitude(v) for v in values)
    j = _choose_pivot(values, fd, scale)
    return None if j is None else pool[j]


def elimination_step(col: FunctionColumn, pivot_pt, scale=0.0):
    """Eliminate ``col[0]`` from the other functions at ``pivot_pt``.

    Returns the step matrix ``M`` (unit lower triangular, nontrivial only
    in its first column) and the tail column: rows 2..n of ``M f``, each of
    which vanishes at ``pivot_pt``.
    """
    n = len(col)
    if n < 2:
        raise DimensionMismatch("an elimination step needs at least two functions")
    fd = col.field
    head = col.handles[0]
    pivot = fd.coerce(head(pivot_pt))
    if fd.is_zero(pivot, scale):
        raise PivotIsZero(f"{head.name} vanishes at {pivot_pt!r}")
    inv = fd.inv(pivot)
    multipliers = [fd.neg(fd.mul(fd.coerce(h(pivot_pt)), inv)) for h in col.handles[1:]]

    M = linalg.identity(n, fd)
    for i, m in enumerate(multipliers, start=1):
        M[i][0] = m
    tail = tuple(
        linear_combination([m, fd.one], [head, h], fd, name=f"({h.name}{_fmt_mult(m, fd)}*{head.name})")
        for m, h in zip(multipliers, col.handles[1:])
    )
    return M, FunctionColumn(tail, fd)


def _fmt_mult(m, fd):
    s = fd.format_scalar(m)
    return s if s.startswith("-") else "+" + s


def _row_norms(col, pool):
    fd = col.field
    return [max(fd.magnitude(v) for v in _values_on(h, pool)) for h in col.handles]


def _combination_scale(coeffs, norms, fd):
    return sum(fd.magnitude(c) * nrm for c, nrm in zip(coeffs, norms))


def certify_independence(col: FunctionColumn, pool: CandidatePool):
    """Certify independence of ``col`` over ``pool`` or return a dependence witness.

    The recursion follows the classical induction on ``n``: pivot on the
    leading function, eliminate it from the rest, recurse on the tail, and
    compose the block transforms.  A witness is the row of the accumulated
    transform belonging to the reduced function that vanished.
    """
    if len(pool) == 0:
        raise EmptyPool("cannot certify over an empty pool")
    fd = col.field
    n = len(col)
    norms = None if fd.is_exact else _row_norms(col, pool)

    A = linalg.identity(n, fd)
    current = col
    leads, points, trace = [], [], []
    for k in range(n):
        lead = current.handles[0]
        values = [fd.coerce(v) for v in _values_on(lead, pool)]
        scale = 0.0 if fd.is_exact else _combination_scale(A[k], norms, fd)
        j = _choose_pivot(values, fd, scale)
        if j is None:
            return DependenceWitness(tuple(A[k]), fd, depth=k, trace=tuple(trace))
        x = pool[j]
        leads.append(lead)
        points.append(x)
        if k == n - 1:
            trace.append(EliminationStep(k, x, values[j], ()))
            break
        M, current = elimination_step(current, x, scale)
        mults = tuple(M[i][0] for i in range(1, len(M)))
        trace.append(EliminationStep(k, x, values[j], mults))
        # A <- (embedded M) @ A: add multiples of row k to the rows below.
        for i, m in enumerate(mults, start=k + 1):
            if fd.is_exact and m == 0:
                continue
            A[i] = [fd.add(a, fd.mul(m, b)) for a, b in zip(A[i], A[k])]

    U = [[fd.zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            U[i][j] = fd.coerce(leads[i](points[j]))
    return IndependenceCertificate(
        tuple(points),
        tuple(tuple(r) for r in A),
        tuple(tuple(r) for r in U),
        fd,
        trace=tuple(trace),
    )


def trace_matrix(trace, n, fd):
    """Compose the step matrices of ``trace``, latest step leftmost."""
    A = linalg.identity(n, fd)
    for step in trace:
        E = linalg.identity(n, fd)
        k = step.pivot_index
        for i, m in enumerate(step.multipliers, start=k + 1):
            E[i][k] = m
        A = linalg.matmul(E, A, fd)
    return A


def is_unit_lower_triangular(A, fd):
    n = len(A)
    return all(
        A[i][j] == (fd.one if i == j else fd.zero)
        for i in range(n) for j in range(i, n)
    )


def _product_bounds(A, F, fd):
    """Per-row bound ``max_j sum_k |A_ik| |F_kj|`` on the size of ``A @ F``."""
    bounds = []
    for row in A:
        best = 0.0
        for j in range(len(F[0]) if F else 0):
            s = sum(fd.magnitude(a) * fd.magnitude(F[k][j]) for k, a in enumerate(row))
            best = max(best, s)
        bounds.append(best)
    return bounds


def certificate_residual(col: FunctionColumn, cert: IndependenceCertificate):
    """Largest relative entry of ``A @ f(points) - U``.

    Each row is measured against ``max(1, bound)`` where ``bound`` is the
    row's magnitude bound from :func:`_product_bounds`.  Exact fields give
    ``0.0`` or ``inf``.
    """
    fd = col.field
    F = sample_matrix(col, cert.points).rows()
    P = linalg.matmul([list(r) for r in cert.A], F, fd)
    if fd.is_exact:
        return 0.0 if [tuple(r) for r in P] == list(cert.U) else float("inf")
    bounds = _product_bounds(cert.A, F, fd)
    worst = 0.0
    for i, row in enumerate(P):
        denom = max(1.0, bounds[i])
        for j, v in enumerate(row):
            worst = max(worst, abs(v - cert.U[i][j]) / denom)
    return worst


def verify_certificate(col: FunctionColumn, cert: IndependenceCertificate) -> bool:
    """Check a certificate from scratch, without trusting how it was made."""
    n = len(col)
    if (cert.n != n or len(cert.A) != n or len(cert.U) != n
            or any(len(r) != n for r in cert.A) or any(len(r) != n for r in cert.U)):
        raise DimensionMismatch(f"certificate is not {n}x{n}")
    fd = col.field
    if cert.field != fd:
        return False
    if not is_unit_lower_triangular(cert.A, fd):
        return False
    if any(cert.U[i][j] != fd.zero for i in range(n) for j in range(i)):
        return False
    F = sample_matrix(col, cert.points).rows()
    if fd.is_exact:
        if any(cert.U[i][i] == 0 for i in range(n)):
            return False
        P = linalg.matmul([list(r) for r in cert.A], F, fd)
        return [tuple(r) for r in P] == list(cert.U)
    bounds = _product_bounds(cert.A, F, fd)
    if any(fd.is_zero(cert.U[i][i], bounds[i]) for i in range(n)):
        return False
    P = linalg.matmul([list(r) for r in cert.A], F, fd)
    return all(
        abs(P[i][j] - cert.U[i][j]) <= fd.tolerance * max(1.0, bounds[i])
        for i in range(n) for j in range(n)
    )


def witness_check(col: FunctionColumn, w: DependenceWitness, pool: CandidatePool) -> bool:
    """True iff ``beta`` is nonzero and ``sum(beta_i f_i)`` vanishes on ``pool``."""
    n = len(col)
    if len(w.beta) != n:
        raise DimensionMismatch(f"witness has {len(w.beta)} coefficients, column has {n}")
    fd = col.field
    if w.field != fd:
        return False
    beta = [fd.coerce(b) for b in w.beta]
    if fd.is_exact:
        if all(b == 0 for b in beta):
            return False
    elif all(fd.is_zero(b) for b in beta):
        return False
    F = sample_matrix(col, pool.points).rows()
    for j in range(len(pool)):
        v = fd.dot(beta, [F[i][j] for i in range(n)])
        if fd.is_exact:
            if v != 0:
                return False
        else:
            scale = sum(fd.magnitude(b) * max(fd.magnitude(x) for x in F[i]) for i, b in enumerate(beta))
            if not fd.is_zero(v, scale):
                return False
    return True
