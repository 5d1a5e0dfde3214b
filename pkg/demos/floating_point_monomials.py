"""
Monomials in floating point
===========================

With approximate reals, a value counts as zero when it is tiny relative
to the size of the functions involved.  At each step the pivot is the
pool point where the reduced leading function is largest, which keeps
the residual of the certificate near machine precision even for the
badly conditioned monomial basis.
"""

from indepcert import CandidatePool, FieldDescriptor, FunctionColumn, certify_independence
from indepcert.elimination import certificate_residual

R = FieldDescriptor.approx(1e-10)
col = FunctionColumn.from_callables(
    [(lambda k: lambda x: x ** k)(k) for k in range(10)], R,
    names=[f"x^{k}" for k in range(10)])
pool = CandidatePool(tuple(float(x) for x in range(10)))

cert = certify_independence(col, pool)
print("pivot order:", cert.points)
print("pivot values:", [f"{step.pivot_value:.4g}" for step in cert.trace])
print("relative residual:", certificate_residual(col, cert))

# Nearly dependent functions are reported as dependent once the
# difference drops under the tolerance.
near = FunctionColumn.from_callables([lambda x: x, lambda x: x * (1 + 1e-13)], R)
print(type(certify_independence(near, pool)).__name__)
