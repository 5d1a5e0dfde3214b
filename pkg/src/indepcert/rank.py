"""Rank of a function system over a candidate pool.

The rank of ``{f_1, ..., f_n}`` equals the largest rank of any sample
matrix ``[f_i(x_j)]`` with ``x_1, ..., x_n`` drawn from the pool.
:func:`system_rank` finds it greedily with elimination certificates;
:func:`brute_force_rank` evaluates the right-hand side literally.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import linalg
from .elimination import IndependenceCertificate, certify_independence
from .errors import CombinatorialBlowup, EmptyPool
from .funcsys import CandidatePool, FunctionColumn, sample_matrix

MAX_TUPLES = 10**6


@dataclass(frozen=True)
class RankResult:
    rank: int
    basis_indices: tuple
    certificate: IndependenceCertificate | None = None


def system_rank(col: FunctionColumn, pool: CandidatePool) -> RankResult:
    """Greedy first-fit rank: keep ``f_i`` iff the kept set stays independent."""
    if len(pool) == 0:
        raise EmptyPool("cannot compute a rank over an empty pool")
    kept = []
    cert = None
    for i in range(len(col)):
        out = certify_independence(col.subcolumn(kept + [i]), pool)
        if isinstance(out, IndependenceCertificate):
            kept.append(i)
            cert = out
    return RankResult(len(kept), tuple(kept), cert)


def brute_force_rank(col: FunctionColumn, pool: CandidatePool, max_tuples=MAX_TUPLES) -> int:
    """Max rank of ``f(x)`` over all ``x`` in ``pool**n`` (repetition allowed).

    Stops early once rank ``min(n, len(pool))`` is reached, since no tuple
    can exceed it.
    """
    if len(pool) == 0:
        raise EmptyPool("cannot enumerate an empty pool")
    n, m = len(col), len(pool)
    if m**n > max_tuples:
        raise CombinatorialBlowup(f"{m}**{n} tuples exceed the limit of {max_tuples}")
    fd = col.field
    # one evaluation per (function, point); tuples only re-index it
    full = sample_matrix(col, pool.points).rows()
    ceiling = min(n, m)
    best = 0
    for idx in itertools.product(range(m), repeat=n):
        sub = [[row[j] for j in idx] for row in full]
        best = max(best, linalg.rank(sub, fd))
        if best == ceiling:
            break
    return best
