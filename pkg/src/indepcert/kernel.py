"""Separable kernels ``K(t, s) = sum_j T_j(t) S_j(s)``.

Covers reducing a representation to independent factors, choosing points
where the factor sample matrices are nonsingular, and recovering the
factors from kernel samples alone:

    S(s) = T^{-1} [K(t_1, s), ..., K(t_n, s)]^T,   T = [T_j(t_i)]
    T(t) = S^{-1} [K(t, s_1), ..., K(t, s_n)]^T,   S = [S_j(s_i)]

The inverses are never formed; solves go through the ``(A, U)`` pair of
the elimination certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .elimination import DependenceWitness, IndependenceCertificate, certify_independence
from .errors import DimensionMismatch, EvaluationFailure, NotReduced, SingularMatrix
from .field import PRIME, FieldDescriptor
from .funcsys import (
    CandidatePool,
    FunctionColumn,
    FunctionHandle,
    linear_combination,
    sample_matrix,
    table_function,
)
from .rank import system_rank

S_FROM_T = "S_from_T"
T_FROM_S = "T_from_S"


@dataclass(frozen=True)
class SeparableKernel:
    """Factor lists of a separable kernel; ``n == 0`` encodes ``K == 0``."""

    t_factors: tuple
    s_factors: tuple
    field: FieldDescriptor

    def __post_init__(self):
        object.__setattr__(self, "t_factors", tuple(self.t_factors))
        object.__setattr__(self, "s_factors", tuple(self.s_factors))
        if len(self.t_factors) != len(self.s_factors):
            raise DimensionMismatch(
                f"{len(self.t_factors)} t-factors but {len(self.s_factors)} s-factors")

    @classmethod
    def from_callables(cls, t_fns, s_fns, fd, t_names=None, s_names=None):
        t_col = FunctionColumn.from_callables(t_fns, fd, t_names) if t_fns else None
        s_col = FunctionColumn.from_callables(s_fns, fd, s_names) if s_fns else None
        return cls(t_col.handles if t_col else (), s_col.handles if s_col else (), fd)

    @property
    def n(self):
        return len(self.t_factors)

    @property
    def t_column(self):
        return FunctionColumn(self.t_factors, self.field)

    @property
    def s_column(self):
        return FunctionColumn(self.s_factors, self.field)

    def __call__(self, t, s):
        fd = self.field
        acc = fd.zero
        for T, S in zip(self.t_factors, self.s_factors):
            acc = fd.add(acc, fd.mul(fd.coerce(T(t)), fd.coerce(S(s))))
        return acc

    def sampler(self):
        return KernelSampler(self, self.field)


class KernelSampler:
    """Black-box, memoized kernel ``(t, s) -> scalar``."""

    def __init__(self, fn, field: FieldDescriptor, name="K"):
        self.field = field
        self._handle = FunctionHandle(lambda ts: fn(*ts), name, field)

    def __call__(self, t, s):
        return self._handle((t, s))


def kernel_from_grid(values, t_points, s_points, fd):
    """Kernel sampler and a trivial representation from a dense grid.

    ``values[i][j]`` is ``K(t_points[i], s_points[j])``.  The representation
    pairs indicator functions of the t points with the grid rows; feed it to
    :func:`reduce_representation` to get a minimal one.
    """
    if len(values) != len(t_points) or any(len(r) != len(s_points) for r in values):
        raise DimensionMismatch("grid shape does not match its point labels")
    table = {(t, s): fd.coerce(v)
             for t, row in zip(t_points, values) for s, v in zip(s_points, row)}

    def lookup(t, s):
        try:
            return table[(t, s)]
        except KeyError:
            raise EvaluationFailure(f"kernel is not tabulated at {(t, s)!r}") from None

    t_handles, s_handles = [], []
    for i, t0 in enumerate(t_points):
        t_handles.append(FunctionHandle(
            lambda t, t0=t0: fd.one if t == t0 else fd.zero, f"[t=={t0}]", fd))
        s_handles.append(table_function(
            {s: table[(t0, s)] for s in s_points}, f"K({t0},.)", fd))
    return KernelSampler(lookup, fd), SeparableKernel(tuple(t_handles), tuple(s_handles), fd)


def express_in_basis(cert: IndependenceCertificate, values):
    """Coefficients ``c`` with ``sum_b c_b g_b(x_j) = values[j]`` at the certificate points.

    With ``A F = U`` (``F`` the basis sample matrix) this is ``F^T c = v``,
    i.e. ``U^T y = v`` followed by ``c = A^T y``.
    """
    fd = cert.field
    y = linalg.solve_lower(linalg.transpose(cert.U), list(values), fd)
    return linalg.matvec(linalg.transpose(cert.A), y, fd)


def _fold(keep_side, other_side, result, pool, fd):
    """Drop dependent factors on one side, folding them into the other side."""
    basis = list(result.basis_indices)
    cert = result.certificate
    dropped = [j for j in range(len(keep_side)) if j not in basis]
    coeffs = {}
    for j in dropped:
        v = [fd.coerce(keep_side[j](x)) for x in cert.points]
        coeffs[j] = express_in_basis(cert, v)
    new_keep = [keep_side[b] for b in basis]
    new_other = []
    for pos, b in enumerate(basis):
        cs = [fd.one] + [coeffs[j][pos] for j in dropped]
        hs = [other_side[b]] + [other_side[j] for j in dropped]
        if all(fd.is_exact and c == 0 for c in cs[1:]):
            new_other.append(other_side[b])
        else:
            new_other.append(linear_combination(cs, hs, fd, name=f"{other_side[b].name}'"))
    return new_keep, new_other


def reduce_representation(k: SeparableKernel, t_pool: CandidatePool, s_pool: CandidatePool):
    """Equivalent representation (on ``t_pool x s_pool``) with independent factors.

    Alternates between the two sides: a dependent t-factor is expressed in
    the kept t-basis and its s-partner is folded into the basis partners,
    then the same on the s-side, until neither side shrinks.  A kernel that
    vanishes on the pools comes back with ``n == 0``.
    """
    fd = k.field
    T, S = list(k.t_factors), list(k.s_factors)
    while T:
        changed = False
        res = system_rank(FunctionColumn(tuple(T), fd), t_pool)
        if res.rank == 0:
            T, S = [], []
            break
        if res.rank < len(T):
            T, S = _fold(T, S, res, t_pool, fd)
            changed = True
        res = system_rank(FunctionColumn(tuple(S), fd), s_pool)
        if res.rank == 0:
            T, S = [], []
            break
        if res.rank < len(S):
            S, T = _fold(S, T, res, s_pool, fd)
            changed = True
        if not changed:
            break
    return SeparableKernel(tuple(T), tuple(S), fd)


@dataclass(frozen=True)
class InterpolationPoints:
    """Points with nonsingular ``T_matrix = [T_j(t_i)]`` and ``S_matrix = [S_j(s_i)]``.

    Matrix rows are indexed by points, columns by factors.
    """

    t_points: tuple
    s_points: tuple
    T_matrix: tuple
    S_matrix: tuple
    t_certificate: IndependenceCertificate
    s_certificate: IndependenceCertificate

    @property
    def n(self):
        return len(self.t_points)

    @classmethod
    def from_certificates(cls, k: SeparableKernel, t_cert, s_cert):
        T = sample_matrix(k.t_column, t_cert.points).rows()
        S = sample_matrix(k.s_column, s_cert.points).rows()
        return cls(
            tuple(t_cert.points), tuple(s_cert.points),
            tuple(map(tuple, linalg.transpose(T))), tuple(map(tuple, linalg.transpose(S))),
            t_cert, s_cert,
        )

    @classmethod
    def from_points(cls, k: SeparableKernel, t_points, s_points):
        """Use caller-chosen points; raises :class:`SingularMatrix` if they do not work.

        The points may come back reordered (elimination order).
        """
        if len(t_points) != k.n or len(s_points) != k.n:
            raise DimensionMismatch(f"need {k.n} points on each side")
        certs = []
        for col, pts in ((k.t_column, t_points), (k.s_column, s_points)):
            out = certify_independence(col, CandidatePool(tuple(pts)))
            if isinstance(out, DependenceWitness):
                raise SingularMatrix(f"factor matrix at {tuple(pts)!r} is singular")
            certs.append(out)
        return cls.from_certificates(k, *certs)


def select_interpolation_points(k: SeparableKernel, t_pool, s_pool) -> InterpolationPoints:
    """Certificate points for both factor columns of a reduced kernel."""
    if k.n == 0:
        raise NotReduced("the zero kernel has no interpolation points")
    certs = []
    for side, col, pool in (("t", k.t_column, t_pool), ("s", k.s_column, s_pool)):
        out = certify_independence(col, pool)
        if isinstance(out, DependenceWitness):
            raise NotReduced(f"{side}-factors are dependent over the pool: beta={out.beta}")
        certs.append(out)
    return InterpolationPoints.from_certificates(k, *certs)


@dataclass(frozen=True)
class FactorTable:
    """Recovered factors tabulated at ``eval_points``; ``values[i][j]`` is factor ``i`` at point ``j``."""

    eval_points: tuple
    values: tuple
    field: FieldDescriptor

    @property
    def vanishing(self):
        """Indices of recovered factors that are zero at every evaluation point."""
        fd = self.field
        return [i for i, row in enumerate(self.values) if all(fd.is_zero(v) for v in row)]

    def handles(self, prefix="F"):
        return tuple(
            table_function(dict(zip(self.eval_points, row)), f"{prefix}{i + 1}", self.field)
            for i, row in enumerate(self.values)
        )


def recover_factors(sampler, pts: InterpolationPoints, side, eval_points) -> FactorTable:
    """Tabulate factors from kernel samples.

    ``side == "S_from_T"`` solves ``T_matrix @ S(s) = [K(t_i, s)]`` for every
    ``s`` in ``eval_points``; ``"T_from_S"`` is the mirror image.
    """
    if side == S_FROM_T:
        cert = pts.t_certificate
        column = lambda e: [sampler(t, e) for t in cert.points]
    elif side == T_FROM_S:
        cert = pts.s_certificate
        column = lambda e: [sampler(e, s) for s in cert.points]
    else:
        raise ValueError(f"side must be {S_FROM_T!r} or {T_FROM_S!r}, got {side!r}")
    fd = cert.field
    eval_points = tuple(eval_points)
    cols = []
    for e in eval_points:
        rhs = [fd.coerce(v) for v in column(e)]
        y = linalg.solve_lower(linalg.transpose(cert.U), rhs, fd)
        cols.append(linalg.matvec(linalg.transpose(cert.A), y, fd))
    values = tuple(tuple(c[i] for c in cols) for i in range(cert.n))
    return FactorTable(eval_points, values, fd)


def reconstruction_residual(sampler, rep: SeparableKernel, t_grid, s_grid, relative=False):
    """Largest ``|K(t, s) - sum_j T_j(t) S_j(s)|`` over the grid.

    Rationals give an exact :class:`~fractions.Fraction`, reals a float, and
    GF(p) the flag ``0`` (all equal) or ``1``.  With ``relative=True`` the
    result is divided by ``max(1, max |K|)`` on the grid (not for GF(p)).
    """
    t_grid, s_grid = tuple(t_grid), tuple(s_grid)
    if not t_grid or not s_grid:
        raise ValueError("residual grids must be nonempty")
    fd = rep.field
    if fd.kind == PRIME:
        for t in t_grid:
            for s in s_grid:
                if fd.coerce(sampler(t, s)) != rep(t, s):
                    return 1
        return 0
    worst = Fraction(0) if fd.is_exact else 0.0
    size = Fraction(0) if fd.is_exact else 0.0
    for t in t_grid:
        for s in s_grid:
            kv = fd.coerce(sampler(t, s))
            worst = max(worst, abs(kv - rep(t, s)))
            size = max(size, abs(kv))
    if relative:
        return worst / max(size, 1)
    return worst
