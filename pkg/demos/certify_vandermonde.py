"""
Certifying independence of 1, x, x^2
====================================

Elimination picks a point where the leading function is nonzero, removes
that function from the rest, and repeats on what is left.  When it
succeeds the output is a certificate ``(points, A, U)`` with ``A`` unit
lower triangular, ``U`` upper triangular with nonzero diagonal, and
``A @ f(points) == U``.  Anyone can check that without rerunning the
elimination.
"""

from indepcert import (
    CandidatePool,
    FieldDescriptor,
    FunctionColumn,
    certify_independence,
    verify_certificate,
)

Q = FieldDescriptor.rational()
col = FunctionColumn.from_callables(
    [lambda x: 1, lambda x: x, lambda x: x * x], Q, names=["1", "x", "x^2"])
pool = CandidatePool((0, 1, 2))

cert = certify_independence(col, pool)
print("points:", cert.points)
print("A:")
for row in cert.A:
    print("   ", [str(v) for v in row])
print("U:")
for row in cert.U:
    print("   ", [str(v) for v in row])

# The determinant of the sampled matrix is the product of the U diagonal.
print("det f(points) =", cert.determinant())
print("verifies:", verify_certificate(col, cert))

# A dependent system gives a witness instead: beta with sum(beta_i f_i) = 0
# at every pool point.
dep = FunctionColumn.from_callables([lambda x: x, lambda x: 2 * x], Q, names=["x", "2x"])
w = certify_independence(dep, pool)
print("witness beta:", [str(b) for b in w.beta])
