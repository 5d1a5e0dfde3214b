"""Shared oracles and generators.

The oracles here deliberately avoid the package's own linear algebra:
ranks come from sympy's DomainMatrix, determinants from cofactor
expansion, and polynomial values from plain integer/Fraction Horner
evaluation.
"""

from fractions import Fraction
import random

import pytest
from sympy import GF, QQ
from sympy.polys.matrices import DomainMatrix

from indepcert import FieldDescriptor, FunctionColumn

FIELDS = {
    "GF(2)": FieldDescriptor.gf(2),
    "GF(5)": FieldDescriptor.gf(5),
    "GF(101)": FieldDescriptor.gf(101),
    "Q": FieldDescriptor.rational(),
}


def horner(coeffs, x):
    """Evaluate sum(c_k x^k) with plain Python numbers."""
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def reduce_to(fd, v):
    """Map an integer/Fraction into ``fd`` without using FieldDescriptor.coerce."""
    if fd.modulus:
        v = Fraction(v)
        return v.numerator * pow(v.denominator, -1, fd.modulus) % fd.modulus
    return Fraction(v)


def oracle_rank(rows, fd):
    """Rank via sympy over QQ or GF(p); ``rows`` are ints/Fractions."""
    if not rows or not rows[0]:
        return 0
    if fd.modulus:
        dom = GF(fd.modulus)
        data = [[dom(int(reduce_to(fd, v))) for v in r] for r in rows]
    else:
        dom = QQ
        data = [[QQ(Fraction(v).numerator, Fraction(v).denominator) for v in r] for r in rows]
    return DomainMatrix(data, (len(rows), len(rows[0])), dom).rank()


def cofactor_det(M, fd):
    """Laplace expansion along the first row, with results reduced into ``fd``."""
    n = len(M)
    if n == 0:
        return reduce_to(fd, 1)
    if n == 1:
        return reduce_to(fd, M[0][0])
    total = Fraction(0)
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        total += (-1) ** j * Fraction(M[0][j]) * Fraction(cofactor_det(minor, FieldDescriptor.rational()))
    return reduce_to(fd, total)


def poly_column(coeff_lists, fd):
    """FunctionColumn of polynomials given by integer coefficient lists."""
    fns = [(lambda cs: lambda x: horner(cs, x))(list(cs)) for cs in coeff_lists]
    names = ["+".join(f"{c}*x^{k}" for k, c in enumerate(cs) if c) or "0" for cs in coeff_lists]
    return FunctionColumn.from_callables(fns, fd, names)


def random_system(rng, fd, max_n=5, max_m=10, max_deg=4, dep_prob=0.35):
    """Random polynomial system plus a pool of distinct field points.

    Returns ``(coeff_lists, points)``.  With probability ``dep_prob`` one
    function is replaced by an integer combination of the others.
    """
    n = rng.randint(1, max_n)
    deg = rng.randint(0, max_deg)
    coeffs = [[rng.randint(-3, 3) for _ in range(deg + 1)] for _ in range(n)]
    if n > 1 and rng.random() < dep_prob:
        k = rng.randrange(n)
        mix = [rng.randint(-2, 2) for _ in range(n)]
        coeffs[k] = [sum(mix[i] * coeffs[i][d] for i in range(n) if i != k) for d in range(deg + 1)]
    if fd.modulus:
        m = rng.randint(1, min(max_m, fd.modulus))
        points = rng.sample(range(fd.modulus), m)
    else:
        m = rng.randint(1, max_m)
        cands = sorted({Fraction(rng.randint(-6, 6), rng.choice([1, 1, 1, 2, 3])) for _ in range(40)})
        points = rng.sample(cands, min(m, len(cands)))
    return coeffs, [reduce_to(fd, p) for p in points]


def full_sample(coeffs, points, fd):
    return [[reduce_to(fd, horner(cs, p)) for p in points] for cs in coeffs]


@pytest.fixture
def Q():
    return FieldDescriptor.rational()


@pytest.fixture
def rng():
    return random.Random(20240611)


# -- acceptance summary ---------------------------------------------------


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::" in nodeid and getattr(rep, "when", "call") == "call":
                lines.append((nodeid.split("::")[-1], "PASS" if outcome == "passed" else "FAIL"))
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for name, verdict in sorted(lines):
            terminalreporter.write_line(f"{verdict}  {name}")
