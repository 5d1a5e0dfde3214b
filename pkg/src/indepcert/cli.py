"""Command-line frontend.

    indepcert certify|rank|kernel <problem-file> [--out DIR] [--seed N] [--format json|csv]

Exit status: 0 on success, 2 when ``certify`` establishes dependence over
the pool (a finding, not a failure), 1 on invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

from . import __version__
from .elimination import (
    DependenceWitness,
    certificate_residual,
    certify_independence,
    verify_certificate,
    witness_check,
)
from .errors import IndepCertError
from .funcsys import CandidatePool
from .kernel import (
    S_FROM_T,
    T_FROM_S,
    SeparableKernel,
    kernel_from_grid,
    recover_factors,
    reconstruction_residual,
    reduce_representation,
    select_interpolation_points,
)
from .problem import ProblemError, load_problem
from .rank import system_rank
from .serialize import (
    certificate_to_json,
    dumps,
    point_to_json,
    scalar_to_json,
    witness_to_json,
)

EXIT_OK, EXIT_INPUT, EXIT_DEPENDENT = 0, 1, 2

SCOPE_NOTE = ("dependence is established for the functions restricted to the candidate pool; "
              "it is inconclusive for the unrestricted domain")


def _label(p):
    if isinstance(p, tuple):
        return ";".join(_label(q) for q in p)
    return str(p)


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _matrix_csv(M, row_names, col_labels, fd):
    return _csv_text([""] + [_label(p) for p in col_labels],
                     [[nm] + [fd.format_scalar(v) if fd.is_exact else repr(v) for v in row]
                      for nm, row in zip(row_names, M)])


def _residual_json(r, fd):
    if fd.is_exact and fd.modulus:
        return {"mismatch": bool(r)}
    return {"max_abs": str(r) if fd.is_exact else float(r)}


def _run_certify(spec):
    col, pool, fd = spec.column, spec.pool, spec.field
    out = certify_independence(col, pool)
    if isinstance(out, DependenceWitness):
        if not witness_check(col, out, pool):
            raise IndepCertError("internal error: witness failed its check")
        result = {"outcome": "dependent", "scope": SCOPE_NOTE,
                  "witness": witness_to_json(out, col.names)}
        table = _csv_text(["function", "beta"],
                          [[nm, scalar_to_json(b, fd)] for nm, b in zip(col.names, out.beta)])
        files = {"witness.json": dumps(result["witness"]), "witness.csv": table}
        return EXIT_DEPENDENT, result, files, table
    if not verify_certificate(col, out):
        raise IndepCertError("internal error: certificate failed verification")
    result = {"outcome": "independent", "certificate": certificate_to_json(out, col.names)}
    if not fd.is_exact:
        result["relative_residual"] = certificate_residual(col, out)
    u_csv = _matrix_csv(out.U, col.names, out.points, fd)
    files = {
        "certificate.json": dumps(result["certificate"]),
        "U.csv": u_csv,
        "A.csv": _matrix_csv(out.A, col.names, col.names, fd),
    }
    return EXIT_OK, result, files, u_csv


def _run_rank(spec):
    col, pool = spec.column, spec.pool
    res = system_rank(col, pool)
    cert = None
    if res.certificate is not None:
        sub = col.subcolumn(res.basis_indices)
        if not verify_certificate(sub, res.certificate):
            raise IndepCertError("internal error: basis certificate failed verification")
        cert = certificate_to_json(res.certificate, sub.names)
    result = {"rank": res.rank, "basis_indices": list(res.basis_indices), "certificate": cert}
    table = _csv_text(["index", "function", "in_basis"],
                      [[i, nm, int(i in res.basis_indices)] for i, nm in enumerate(col.names)])
    files = {"rank.csv": table}
    if cert is not None:
        files["certificate.json"] = dumps(cert)
    return EXIT_OK, result, files, table


def _factor_table(handles, points, fd):
    names = [h.name for h in handles]
    rows = [[_label(p)] + [scalar_to_json(h(p), fd) for h in handles] for p in points]
    return {"factors": names, "points": [point_to_json(p, fd) for p in points],
            "values": [[scalar_to_json(h(p), fd) for p in points] for h in handles]}, \
        _csv_text(["point"] + names, rows)


def _run_kernel(spec):
    fd, kd = spec.field, spec.kernel
    if "grid" in kd:
        sampler, rep = kernel_from_grid(kd["grid"], kd["t_points"], kd["s_points"], fd)
        t_pool, s_pool = CandidatePool(kd["t_points"]), CandidatePool(kd["s_points"])
    else:
        rep = SeparableKernel(tuple(kd["t_factors"]), tuple(kd["s_factors"]), fd)
        sampler = rep.sampler()
        t_pool, s_pool = kd["t_pool"], kd["s_pool"]

    reduced = reduce_representation(rep, t_pool, s_pool)
    result = {"input_terms": rep.n, "reduced_terms": reduced.n}
    files = {}
    res = reconstruction_residual(sampler, reduced, t_pool, s_pool)
    result["reduction_residual"] = _residual_json(res, fd)
    if reduced.n == 0:
        result["zero_kernel"] = True
        return EXIT_OK, result, files, _csv_text(["point"], [])

    if spec.mode == "kernel-reduce":
        t_json, t_csv = _factor_table(reduced.t_factors, t_pool, fd)
        s_json, s_csv = _factor_table(reduced.s_factors, s_pool, fd)
        result["reduced"] = {"t": t_json, "s": s_json}
        files.update({"t_factors.csv": t_csv, "s_factors.csv": s_csv})
        return EXIT_OK, result, files, t_csv

    pts = select_interpolation_points(reduced, t_pool, s_pool)
    S_hat = recover_factors(sampler, pts, S_FROM_T, s_pool)
    T_hat = recover_factors(sampler, pts, T_FROM_S, t_pool)
    recovered = SeparableKernel(T_hat.handles("T"), S_hat.handles("S"), fd)
    res = reconstruction_residual(sampler, recovered, t_pool, s_pool)
    t_json, t_csv = _factor_table(recovered.t_factors, t_pool, fd)
    s_json, s_csv = _factor_table(recovered.s_factors, s_pool, fd)
    result.update({
        "t_points": [point_to_json(p, fd) for p in pts.t_points],
        "s_points": [point_to_json(p, fd) for p in pts.s_points],
        "T_matrix": [[scalar_to_json(v, fd) for v in row] for row in pts.T_matrix],
        "S_matrix": [[scalar_to_json(v, fd) for v in row] for row in pts.S_matrix],
        "recovered": {"t": t_json, "s": s_json},
        "reconstruction_residual": _residual_json(res, fd),
    })
    files.update({"t_factors.csv": t_csv, "s_factors.csv": s_csv})
    return EXIT_OK, result, files, t_csv + "\n" + s_csv


_RUNNERS = {
    "certify": _run_certify,
    "rank": _run_rank,
    "kernel-reduce": _run_kernel,
    "kernel-recover": _run_kernel,
}


def run(spec, command):
    """Run a loaded problem; returns ``(exit_status, report, files, csv_text)``."""
    status, result, files, table = _RUNNERS[spec.mode](spec)
    report = {
        "tool": "indepcert",
        "version": __version__,
        "command": command,
        "field": spec.field.to_json(),
        "problem": spec.document,
        "result": result,
    }
    files = {"report.json": dumps(report), **files}
    return status, report, files, table


def build_parser():
    p = argparse.ArgumentParser(
        prog="indepcert",
        description="Certify linear independence, compute rank, and factor separable kernels.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("command", choices=["certify", "rank", "kernel"])
    p.add_argument("problem", help="problem file (.json or .toml)")
    p.add_argument("--out", type=Path, help="directory for report and table files")
    p.add_argument("--seed", type=int, help="seed for random pools (overrides the file)")
    p.add_argument("--format", choices=["json", "csv"], default="json",
                   help="what to print on stdout")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        spec = load_problem(args.problem, command=args.command, seed=args.seed)
        status, report, files, table = run(spec, args.command)
    except ProblemError as exc:
        print(f"indepcert: invalid problem: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (IndepCertError, ValueError, ArithmeticError) as exc:
        print(f"indepcert: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.out is not None:
        try:
            args.out.mkdir(parents=True, exist_ok=True)
            for name, text in files.items():
                (args.out / name).write_text(text, encoding="utf-8")
        except OSError as exc:
            print(f"indepcert: cannot write output: {exc}", file=sys.stderr)
            return EXIT_INPUT
    sys.stdout.write(files["report.json"] if args.format == "json" else table)
    return status


if __name__ == "__main__":
    sys.exit(main())
