"""JSON forms of certificates and witnesses.

Exact scalars are written as strings (``"3/2"``, ``"5 mod 7"``) and
approximate ones as JSON numbers, so exact certificates round-trip
bit-for-bit.  Points are written as scalars when they are field elements,
``{"label": ...}`` when they are table labels, and lists for product-domain
tuples.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .elimination import DependenceWitness, IndependenceCertificate
from .field import APPROX, PRIME, FieldDescriptor


def scalar_to_json(v, fd: FieldDescriptor):
    if fd.kind == APPROX:
        return float(v)
    return fd.format_scalar(v)


def scalar_from_json(obj, fd: FieldDescriptor):
    if isinstance(obj, str):
        return fd.parse_scalar(obj)
    return fd.coerce(obj)


def point_to_json(p, fd: FieldDescriptor):
    if isinstance(p, tuple):
        return [point_to_json(q, fd) for q in p]
    if isinstance(p, str):
        return {"label": p}
    if isinstance(p, Fraction):
        return str(p)
    if isinstance(p, bool):
        return int(p)
    if isinstance(p, int):
        return f"{p} mod {fd.modulus}" if fd.kind == PRIME else p
    if isinstance(p, float):
        return p
    raise TypeError(f"cannot serialize point {p!r}")


def point_from_json(obj, fd: FieldDescriptor):
    if isinstance(obj, list):
        return tuple(point_from_json(q, fd) for q in obj)
    if isinstance(obj, dict):
        return obj["label"]
    if isinstance(obj, str):
        if fd.kind == PRIME:
            return fd.parse_scalar(obj)
        return Fraction(obj)
    return obj


def _matrix_to_json(M, fd):
    return [[scalar_to_json(v, fd) for v in row] for row in M]


def _matrix_from_json(rows, fd):
    return tuple(tuple(scalar_from_json(v, fd) for v in row) for row in rows)


def certificate_to_json(cert: IndependenceCertificate, names=None) -> dict:
    fd = cert.field
    out = {
        "kind": "certificate",
        "field": fd.to_json(),
        "points": [point_to_json(p, fd) for p in cert.points],
        "A": _matrix_to_json(cert.A, fd),
        "U": _matrix_to_json(cert.U, fd),
    }
    if names is not None:
        out["functions"] = list(names)
    return out


def certificate_from_json(obj: dict) -> IndependenceCertificate:
    if obj.get("kind") != "certificate":
        raise ValueError("not a certificate document")
    fd = FieldDescriptor.from_json(obj["field"])
    return IndependenceCertificate(
        tuple(point_from_json(p, fd) for p in obj["points"]),
        _matrix_from_json(obj["A"], fd),
        _matrix_from_json(obj["U"], fd),
        fd,
    )


def witness_to_json(w: DependenceWitness, names=None) -> dict:
    fd = w.field
    out = {
        "kind": "witness",
        "field": fd.to_json(),
        "beta": [scalar_to_json(b, fd) for b in w.beta],
        "scope": "pool",
    }
    if names is not None:
        out["functions"] = list(names)
    return out


def witness_from_json(obj: dict) -> DependenceWitness:
    if obj.get("kind") != "witness":
        raise ValueError("not a witness document")
    fd = FieldDescriptor.from_json(obj["field"])
    return DependenceWitness(tuple(scalar_from_json(b, fd) for b in obj["beta"]), fd)


def dumps(obj) -> str:
    """Deterministic JSON text used for every report."""
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"
