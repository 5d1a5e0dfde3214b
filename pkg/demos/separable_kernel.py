"""
Shortening and recovering a separable kernel
============================================

A kernel ``K(t, s) = sum_j T_j(t) S_j(s)`` written with redundant terms
can be shortened: whenever some ``T_j`` depends on the others it is
folded into their partners on the ``S`` side, and the same the other way
around.  Once both sides are independent, a certificate for each side
gives interpolation points, and the factors can be recovered from
samples of ``K`` alone.
"""

from indepcert import (
    CandidatePool,
    FieldDescriptor,
    SeparableKernel,
    recover_factors,
    reconstruction_residual,
    reduce_representation,
    select_interpolation_points,
)
from indepcert.kernel import S_FROM_T, T_FROM_S

Q = FieldDescriptor.rational()

# Four terms, but t and 2t + 1 are combinations of 1 and t.
k = SeparableKernel.from_callables(
    [lambda t: 1, lambda t: t, lambda t: 2 * t + 1, lambda t: t * t],
    [lambda s: s, lambda s: 1, lambda s: s * s, lambda s: 1 - s],
    Q,
)
t_pool = CandidatePool.grid(-2, 1, 5, Q)
s_pool = CandidatePool.grid(0, 1, 5, Q)

reduced = reduce_representation(k, t_pool, s_pool)
print("terms before:", k.n, "after:", reduced.n)
print("residual of the shortened form:", reconstruction_residual(k.sampler(), reduced, t_pool, s_pool))

# Interpolation points and factor recovery from kernel samples.
pts = select_interpolation_points(reduced, t_pool, s_pool)
print("t points:", [str(t) for t in pts.t_points], " s points:", [str(s) for s in pts.s_points])

sampler = k.sampler()
S_hat = recover_factors(sampler, pts, S_FROM_T, s_pool)
T_hat = recover_factors(sampler, pts, T_FROM_S, t_pool)
rebuilt = SeparableKernel(T_hat.handles("T"), S_hat.handles("S"), Q)
print("residual after recovery:", reconstruction_residual(sampler, rebuilt, t_pool, s_pool))
