"""
Functions on a product domain
=============================

If the functions restricted to one slice ``z = z*`` are already
independent, the same sampled matrix works for the full functions on
``Y x Z``.  So it is enough to search pool points of the form
``(y, z*)``.
"""

from indepcert import CandidatePool, FieldDescriptor, FunctionColumn, certify_independence
from indepcert.exprparse import compile_function

Q = FieldDescriptor.rational()


def show(points):
    return ", ".join(f"({y}, {z})" for y, z in points)


z_star = 2
exprs = [
    "1 + (z - 2)*y",
    "y + (z - 2)^2",
    "y^2 - 3*(z - 2)*y*z",
]
col = FunctionColumn(tuple(compile_function(e, ["y", "z"], Q) for e in exprs), Q)

slice_pool = CandidatePool(tuple((Q.coerce(y), Q.coerce(z_star)) for y in range(4)))
cert = certify_independence(col, slice_pool)
print("certificate points:", show(cert.points))
print("U diagonal:", [str(cert.U[i][i]) for i in range(3)])

# A full product pool also works; the certificate may then use other slices.
full = CandidatePool.product(CandidatePool.grid(0, 1, 3, Q), CandidatePool.grid(0, 1, 3, Q))
print("product pool points used:", show(certify_independence(col, full).points))
