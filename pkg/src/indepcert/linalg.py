"""Dense matrix helpers over a :class:`FieldDescriptor`.

Matrices are lists of rows.  Nothing here is clever; the point is that the
same code runs over rationals, GF(p) and floats.
"""

from __future__ import annotations

from .errors import DimensionMismatch, InversionOfZero, SingularMatrix


def identity(n, fd):
    return [[fd.one if i == j else fd.zero for j in range(n)] for i in range(n)]


def zeros(n, m, fd):
    return [[fd.zero] * m for _ in range(n)]


def transpose(M):
    return [list(col) for col in zip(*M)]


def matmul(A, B, fd):
    if A and len(A[0]) != len(B):
        raise DimensionMismatch(f"cannot multiply {len(A)}x{len(A[0])} by {len(B)}x?")
    Bt = transpose(B) if B else []
    return [[fd.dot(row, col) for col in Bt] for row in A]


def matvec(A, v, fd):
    return [fd.dot(row, v) for row in A]


def rank(M, fd, scale=None):
    """Rank of ``M`` by row reduction with partial pivoting.

    For approximate reals, entries are compared against ``scale`` (default:
    largest entry magnitude) through the field's zero test.
    """
    rows = [list(r) for r in M]
    if not rows or not rows[0]:
        return 0
    n, m = len(rows), len(rows[0])
    if scale is None:
        scale = max(fd.magnitude(v) for r in rows for v in r)
    r = 0
    for c in range(m):
        best, best_mag = None, -1.0
        for i in range(r, n):
            mag = fd.magnitude(rows[i][c])
            if not fd.is_zero(rows[i][c], scale) and mag > best_mag:
                best, best_mag = i, mag
                if fd.is_exact:
                    break
        if best is None:
            continue
        rows[r], rows[best] = rows[best], rows[r]
        inv = fd.inv(rows[r][c])
        for i in range(r + 1, n):
            if rows[i][c] == 0:
                continue
            factor = fd.mul(rows[i][c], inv)
            rows[i] = [fd.sub(a, fd.mul(factor, b)) for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == n:
            break
    return r


def solve_lower(L, b, fd, unit=False):
    """Forward substitution for ``L x = b`` with ``L`` lower triangular."""
    n = len(L)
    x = [fd.zero] * n
    for i in range(n):
        acc = b[i]
        for j in range(i):
            acc = fd.sub(acc, fd.mul(L[i][j], x[j]))
        x[i] = acc if unit else _divide(acc, L[i][i], i, fd)
    return x


def solve_upper(U, b, fd):
    """Back substitution for ``U x = b`` with ``U`` upper triangular."""
    n = len(U)
    x = [fd.zero] * n
    for i in reversed(range(n)):
        acc = b[i]
        for j in range(i + 1, n):
            acc = fd.sub(acc, fd.mul(U[i][j], x[j]))
        x[i] = _divide(acc, U[i][i], i, fd)
    return x


def _divide(a, d, i, fd):
    try:
        return fd.div(a, d)
    except InversionOfZero:
        raise SingularMatrix(f"zero diagonal entry at {i}") from None
