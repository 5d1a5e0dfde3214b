"""Problem files: schema validation and construction of engine inputs.

A problem file is JSON (or TOML, chosen by the ``.toml`` suffix)::

    {
      "schema": 1,
      "field": "rational" | "gf(p)" | {"approx": 1e-10},
      "mode": "certify" | "rank" | "kernel-reduce" | "kernel-recover",
      "variables": ["x"],
      "functions": ["1", "x", "x^2"],       # or "table": "values.csv"
      "pool": {"grid": {"start": 0, "step": 1, "count": 3}},
      "kernel": {...}                        # kernel modes only
    }

Pools are ``{"points": [...]}``, ``{"grid": {start, step, count}}``,
``{"random": {count, seed, low, high}}`` or ``{"product": [pool, pool]}``.
Kernel sections hold either ``t_factors``/``s_factors`` expressions with
``t_pool``/``s_pool``, or a dense ``grid`` CSV.  Relative paths resolve
against the problem file's directory.
"""

from __future__ import annotations

import copy
import csv
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .errors import IndepCertError
from .exprparse import ParseError, compile_function
from .field import FieldDescriptor
from .funcsys import CandidatePool, FunctionColumn, table_function

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

SCHEMA_VERSION = 1
MODES = ("certify", "rank", "kernel-reduce", "kernel-recover")


class ProblemError(IndepCertError):
    """Invalid problem file; ``location`` is a JSON-pointer-style path."""

    def __init__(self, location, message):
        self.location = location
        super().__init__(f"{location or '/'}: {message}")


@dataclass
class ProblemSpec:
    field: FieldDescriptor
    mode: str
    document: dict
    column: FunctionColumn | None = None
    pool: CandidatePool | None = None
    kernel: dict = field(default_factory=dict)
    base_dir: Path = Path(".")


def _read_document(path: Path):
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ProblemError("", f"cannot read {path}: {exc.strerror}") from None
    try:
        if path.suffix.lower() == ".toml":
            return tomllib.loads(raw.decode("utf-8"))
        return json.loads(raw.decode("utf-8"))
    except UnicodeDecodeError as exc:
        raise ProblemError("", f"file is not UTF-8 (byte {exc.start})") from None
    except json.JSONDecodeError as exc:
        raise ProblemError("", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ProblemError("", f"invalid TOML: {exc}") from None


def _int_field(obj, key, loc, minimum=None):
    v = obj.get(key)
    if isinstance(v, bool) or not isinstance(v, int):
        raise ProblemError(f"{loc}/{key}", f"expected an integer, got {v!r}")
    if minimum is not None and v < minimum:
        raise ProblemError(f"{loc}/{key}", f"must be >= {minimum}")
    return v


def _point(obj, fd, loc):
    if isinstance(obj, list):
        return tuple(_point(o, fd, f"{loc}/{i}") for i, o in enumerate(obj))
    if isinstance(obj, bool) or not isinstance(obj, (int, float, str)):
        raise ProblemError(loc, f"not a point: {obj!r}")
    try:
        return fd.coerce(obj)
    except IndepCertError as exc:
        raise ProblemError(loc, str(exc)) from None


def build_pool(spec, fd, loc, seed=None):
    """Candidate pool from a pool spec; ``seed`` overrides any seed in the file."""
    if not isinstance(spec, dict) or len(spec) != 1:
        raise ProblemError(loc, "a pool is one of {points|grid|random|product}")
    (kind, body), = spec.items()
    sub = f"{loc}/{kind}"
    try:
        if kind == "points":
            if not isinstance(body, list) or not body:
                raise ProblemError(sub, "expected a nonempty list of points")
            return CandidatePool(tuple(_point(p, fd, f"{sub}/{i}") for i, p in enumerate(body)))
        if kind == "grid":
            if not isinstance(body, dict):
                raise ProblemError(sub, "expected {start, step, count}")
            count = _int_field(body, "count", sub, minimum=1)
            start = _point(body.get("start", 0), fd, f"{sub}/start")
            step = _point(body.get("step", 1), fd, f"{sub}/step")
            return CandidatePool.grid(start, step, count, fd)
        if kind == "random":
            if not isinstance(body, dict):
                raise ProblemError(sub, "expected {count, seed, low, high}")
            count = _int_field(body, "count", sub, minimum=1)
            s = seed if seed is not None else body.get("seed")
            if isinstance(s, bool) or not isinstance(s, int):
                raise ProblemError(f"{sub}/seed", "a seed is mandatory for random pools")
            return CandidatePool.random(count, s, fd, low=body.get("low", 0), high=body.get("high"))
        if kind == "product":
            if not isinstance(body, list) or len(body) != 2:
                raise ProblemError(sub, "expected two pool specs")
            left = build_pool(body[0], fd, f"{sub}/0", seed)
            right = build_pool(body[1], fd, f"{sub}/1", seed)
            return CandidatePool.product(left, right)
    except ProblemError:
        raise
    except (IndepCertError, ValueError) as exc:
        raise ProblemError(sub, str(exc)) from None
    raise ProblemError(loc, f"unknown pool kind {kind!r}")


def _compile_all(exprs, variables, fd, loc):
    if not isinstance(exprs, list) or not exprs:
        raise ProblemError(loc, "expected a nonempty list of expressions")
    handles = []
    for i, src in enumerate(exprs):
        if not isinstance(src, str):
            raise ProblemError(f"{loc}/{i}", "expression must be a string")
        try:
            handles.append(compile_function(src, variables, fd))
        except ParseError as exc:
            raise ProblemError(f"{loc}/{i}", f"expression {i}: {exc}") from None
    return handles


def read_table(path: Path, fd, loc):
    """CSV with a header row; first column point labels, the rest values.

    Returns ``(labels, names, rows)`` where ``rows[i]`` are the scalars of
    data row ``i``.
    """
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            records = list(csv.reader(fh))
    except OSError as exc:
        raise ProblemError(loc, f"cannot read {path}: {exc.strerror}") from None
    except (UnicodeDecodeError, csv.Error) as exc:
        raise ProblemError(loc, f"{path.name}: {exc}") from None
    if len(records) < 2:
        raise ProblemError(loc, f"{path.name}: need a header row and at least one data row")
    header = records[0]
    if len(header) < 2:
        raise ProblemError(loc, f"{path.name}: need a label column and at least one value column")
    labels, rows = [], []
    for r, rec in enumerate(records[1:], start=2):
        if len(rec) != len(header):
            raise ProblemError(loc, f"{path.name}: row {r} has {len(rec)} cells, header has {len(header)}")
        vals = []
        for c, cell in enumerate(rec[1:], start=1):
            try:
                vals.append(fd.parse_scalar(cell))
            except IndepCertError:
                raise ProblemError(
                    loc, f"{path.name}: row {r}, column {c + 1} ({header[c]!r}): "
                         f"non-numeric cell {cell!r}") from None
        labels.append(rec[0].strip())
        rows.append(vals)
    if len(set(labels)) != len(labels):
        raise ProblemError(loc, f"{path.name}: duplicate point labels")
    return labels, [h.strip() for h in header[1:]], rows


def _load_kernel(doc, fd, base, seed):
    k = doc.get("kernel")
    if not isinstance(k, dict):
        raise ProblemError("/kernel", "kernel modes need a kernel section")
    out = {}
    if "grid" in k:
        if not isinstance(k["grid"], str):
            raise ProblemError("/kernel/grid", "expected a CSV path")
        t_labels, s_labels, rows = read_table(base / k["grid"], fd, "/kernel/grid")
        out.update(grid=rows, t_points=tuple(t_labels), s_points=tuple(s_labels))
        return out
    t_var = k.get("t_variable", "t")
    s_var = k.get("s_variable", "s")
    for key, v in (("t_variable", t_var), ("s_variable", s_var)):
        if not isinstance(v, str):
            raise ProblemError(f"/kernel/{key}", "expected a variable name")
    T = _compile_all(k.get("t_factors"), [t_var], fd, "/kernel/t_factors")
    S = _compile_all(k.get("s_factors"), [s_var], fd, "/kernel/s_factors")
    if len(T) != len(S):
        raise ProblemError("/kernel", f"{len(T)} t_factors but {len(S)} s_factors")
    for key in ("t_pool", "s_pool"):
        if key not in k:
            raise ProblemError(f"/kernel/{key}", "missing pool")
    out.update(
        t_factors=T, s_factors=S,
        t_pool=build_pool(k["t_pool"], fd, "/kernel/t_pool", seed),
        s_pool=build_pool(k["s_pool"], fd, "/kernel/s_pool", seed),
    )
    return out


def load_problem(path, command=None, seed=None) -> ProblemSpec:
    """Read, validate and pre-compile a problem file.

    ``command`` is the CLI subcommand (``certify``, ``rank`` or ``kernel``)
    and supplies the default mode.  Every expression is parsed here so
    syntax errors surface before any computation.
    """
    path = Path(path)
    doc = _read_document(path)
    if not isinstance(doc, dict):
        raise ProblemError("", "top level must be an object")
    doc = copy.deepcopy(doc)
    base = path.parent

    schema = doc.setdefault("schema", SCHEMA_VERSION)
    if schema != SCHEMA_VERSION:
        raise ProblemError("/schema", f"unsupported schema {schema!r} (expected {SCHEMA_VERSION})")
    if "field" not in doc:
        raise ProblemError("/field", "missing field")
    try:
        fd = FieldDescriptor.from_json(doc["field"])
    except IndepCertError as exc:
        raise ProblemError("/field", str(exc)) from None

    default_mode = {"certify": "certify", "rank": "rank", "kernel": "kernel-recover"}.get(command, "certify")
    mode = doc.setdefault("mode", default_mode)
    if mode not in MODES:
        raise ProblemError("/mode", f"unknown mode {mode!r}")
    if command is not None:
        allowed = ("kernel-reduce", "kernel-recover") if command == "kernel" else (command,)
        if mode not in allowed:
            raise ProblemError("/mode", f"mode {mode!r} does not match command {command!r}")
    if seed is not None:
        doc["seed"] = seed

    spec = ProblemSpec(fd, mode, doc, base_dir=base)
    if mode.startswith("kernel"):
        spec.kernel = _load_kernel(doc, fd, base, seed)
        return spec

    if "table" in doc:
        if not isinstance(doc["table"], str):
            raise ProblemError("/table", "expected a CSV path")
        labels, names, rows = read_table(base / doc["table"], fd, "/table")
        handles = tuple(
            table_function({lab: row[c] for lab, row in zip(labels, rows)}, names[c], fd)
            for c in range(len(names))
        )
        spec.column = FunctionColumn(handles, fd)
        if "pool" in doc:
            pts = doc["pool"].get("points") if isinstance(doc["pool"], dict) else None
            if not isinstance(pts, list) or not pts or not all(isinstance(p, str) for p in pts):
                raise ProblemError("/pool", "tabulated functions take a list of point labels")
            missing = [p for p in pts if p not in labels]
            if missing:
                raise ProblemError("/pool/points", f"labels not in table: {missing}")
            spec.pool = CandidatePool(tuple(pts))
        else:
            spec.pool = CandidatePool(tuple(labels))
        return spec

    variables = doc.setdefault("variables", ["x"])
    if (not isinstance(variables, list) or not variables
            or not all(isinstance(v, str) for v in variables)
            or len(set(variables)) != len(variables)):
        raise ProblemError("/variables", "expected a list of distinct names")
    spec.column = FunctionColumn(tuple(_compile_all(doc.get("functions"), variables, fd, "/functions")), fd)
    if "pool" not in doc:
        raise ProblemError("/pool", "missing pool")
    spec.pool = build_pool(doc["pool"], fd, "/pool", seed)
    if len(variables) > 1 and not all(
            isinstance(p, tuple) and len(p) == len(variables) for p in spec.pool):
        raise ProblemError("/pool", f"points must be {len(variables)}-tuples")
    return spec
