"""Function columns, candidate pools and sample matrices."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from .errors import DimensionMismatch, EmptyPool, EvaluationFailure, IndepCertError
from .field import FieldDescriptor


class FunctionHandle:
    """A named, memoized map from domain points to scalars.

    The wrapped callable must be pure: the memo table assumes repeated
    evaluation at a point yields the same scalar.  When ``field`` is given,
    raw results are coerced into it.
    """

    def __init__(self, fn: Callable[[Any], Any], name: str | None = None,
                 field: FieldDescriptor | None = None):
        self._fn = fn
        self.name = name if name is not None else getattr(fn, "__name__", "f")
        self.field = field
        self._memo: dict = {}
        self._lock = threading.Lock()

    def __call__(self, point):
        try:
            return self._memo[point]
        except KeyError:
            pass
        except TypeError as exc:
            raise EvaluationFailure(f"{self.name}: unhashable point {point!r}") from exc
        try:
            value = self._fn(point)
            if self.field is not None:
                value = self.field.coerce(value)
        except EvaluationFailure:
            raise
        except Exception as exc:
            raise EvaluationFailure(f"{self.name} failed at {point!r}: {exc}") from exc
        with self._lock:
            return self._memo.setdefault(point, value)

    def __repr__(self):
        return f"FunctionHandle({self.name!r})"


def table_function(table: dict, name: str, field: FieldDescriptor) -> FunctionHandle:
    """Handle backed by a lookup table; points outside the table fail."""
    frozen = dict(table)

    def lookup(point):
        try:
            return frozen[point]
        except KeyError:
            raise EvaluationFailure(f"{name} is not tabulated at {point!r}") from None

    return FunctionHandle(lookup, name, field)


def linear_combination(coeffs, handles, fd: FieldDescriptor, name="g") -> FunctionHandle:
    """Handle evaluating ``sum(c * h(point))``; zero coefficients are skipped."""
    terms = [(c, h) for c, h in zip(coeffs, handles) if not (fd.is_exact and c == 0)]

    def combo(point):
        acc = fd.zero
        for c, h in terms:
            acc = fd.add(acc, fd.mul(c, h(point)))
        return acc

    return FunctionHandle(combo, name, fd)


@dataclass(frozen=True)
class CandidatePool:
    """Finite, ordered working subset of the domain.

    Points may be field scalars, labels, or tuples for product domains.
    """

    points: tuple

    def __post_init__(self):
        pts = tuple(self.points)
        object.__setattr__(self, "points", pts)
        if not pts:
            raise EmptyPool("a candidate pool needs at least one point")
        try:
            distinct = len(set(pts)) == len(pts)
        except TypeError as exc:
            raise IndepCertError("pool points must be hashable") from exc
        if not distinct:
            raise IndepCertError("pool points must be pairwise distinct")

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i):
        return self.points[i]

    @classmethod
    def grid(cls, start, step, count, fd: FieldDescriptor):
        """``count`` points ``start + k*step`` coerced into ``fd``."""
        start, step = fd.coerce(start), fd.coerce(step)
        pts = [fd.add(start, fd.mul(fd.from_int(k), step)) for k in range(count)]
        return cls(tuple(pts))

    @classmethod
    def random(cls, count, seed, fd: FieldDescriptor, low=0, high=None):
        """``count`` distinct seeded draws.

        Exact fields draw integers from ``[low, high)`` (``high`` defaults to
        the modulus for GF(p)); approximate reals draw uniformly.
        """
        if seed is None:
            raise ValueError("a seed is mandatory for random pools")
        rng = np.random.default_rng(seed)
        if fd.is_exact:
            if high is None:
                if not fd.modulus:
                    raise ValueError("random rational pools need an upper bound")
                high = fd.modulus
            if high - low < count:
                raise ValueError(f"cannot draw {count} distinct integers from [{low}, {high})")
            draws = rng.choice(np.arange(low, high), size=count, replace=False)
            pts = []
            for d in draws:
                p = fd.from_int(int(d))
                if p not in pts:
                    pts.append(p)
            if len(pts) < count:
                raise ValueError("draws collide after reduction into the field")
            return cls(tuple(pts))
        high = 1.0 if high is None else high
        pts = list(dict.fromkeys(float(v) for v in rng.uniform(low, high, size=count)))
        return cls(tuple(pts))

    @classmethod
    def product(cls, left: "CandidatePool", right: "CandidatePool"):
        return cls(tuple((a, b) for a in left for b in right))


@dataclass(frozen=True)
class FunctionColumn:
    """The column ``f = [f_1, ..., f_n]`` over a fixed field."""

    handles: tuple
    field: FieldDescriptor

    def __post_init__(self):
        hs = tuple(self.handles)
        object.__setattr__(self, "handles", hs)
        if not hs:
            raise DimensionMismatch("a function column needs at least one function")

    @classmethod
    def from_callables(cls, fns: Sequence[Callable], fd: FieldDescriptor, names=None):
        names = names or [getattr(f, "__name__", f"f{i + 1}") for i, f in enumerate(fns)]
        return cls(tuple(FunctionHandle(f, nm, fd) for f, nm in zip(fns, names)), fd)

    def __len__(self):
        return len(self.handles)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return FunctionColumn(self.handles[i], self.field)
        return self.handles[i]

    @property
    def names(self):
        return [h.name for h in self.handles]

    def subcolumn(self, indices):
        return FunctionColumn(tuple(self.handles[i] for i in indices), self.field)

    def evaluate(self, i, point):
        return self.field.coerce(self.handles[i](point))


@dataclass(frozen=True)
class SampleMatrix:
    """``[f_i(x_j)]``: rows are functions, columns are points."""

    values: tuple
    points: tuple
    column: FunctionColumn = field(repr=False)

    @property
    def shape(self):
        return len(self.values), len(self.points)

    def rows(self):
        return [list(r) for r in self.values]

    def recheck(self) -> bool:
        return sample_matrix(self.column, self.points).values == self.values


def sample_matrix(col: FunctionColumn, pts) -> SampleMatrix:
    """Evaluate every function of ``col`` at every point of ``pts``."""
    pts = tuple(pts)
    rows = []
    for i in range(len(col)):
        row = []
        for j, p in enumerate(pts):
            try:
                row.append(col.evaluate(i, p))
            except EvaluationFailure as exc:
                raise EvaluationFailure(str(exc), index=(i, j)) from exc
            except Exception as exc:
                raise EvaluationFailure(
                    f"{col.handles[i].name} at {p!r}: {exc}", index=(i, j)) from exc
        rows.append(tuple(row))
    return SampleMatrix(tuple(rows), pts, col)


def apply_transform(A, col: FunctionColumn) -> FunctionColumn:
    """The column ``g = A f`` with ``g_i = sum_j A[i][j] f_j``, composed lazily."""
    n = len(col)
    if len(A) != n or any(len(row) != n for row in A):
        raise DimensionMismatch(f"transform must be {n}x{n}")
    fd = col.field
    handles = tuple(
        linear_combination([fd.coerce(a) for a in row], col.handles, fd, name=f"g{i + 1}")
        for i, row in enumerate(A)
    )
    return FunctionColumn(handles, fd)
