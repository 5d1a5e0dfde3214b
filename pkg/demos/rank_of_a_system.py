"""
Rank of a function system
=========================

The rank over a pool is the largest rank of any sampled matrix
``[f_i(x_j)]``.  ``system_rank`` grows a basis greedily, keeping each
function that stays independent of the ones kept so far.
``brute_force_rank`` tries every tuple of pool points and is only
practical for tiny cases, which is what makes it a good cross-check.
"""

from indepcert import CandidatePool, FieldDescriptor, FunctionColumn, brute_force_rank, system_rank
from indepcert.exprparse import compile_function

Q = FieldDescriptor.rational()
exprs = ["1", "x", "1 + x", "x^2 - x", "3*x^2 + 2"]
col_handles = [compile_function(e, ["x"], Q) for e in exprs]

col = FunctionColumn(tuple(col_handles), Q)
pool = CandidatePool.grid(0, 1, 4, Q)

res = system_rank(col, pool)
print("rank:", res.rank)
print("basis:", [exprs[i] for i in res.basis_indices])
print("certificate points for the basis:", [str(p) for p in res.certificate.points])

# The exhaustive answer agrees.
print("brute force rank:", brute_force_rank(col, CandidatePool.grid(0, 1, 3, Q)))

# Over GF(2), x^2 and x coincide as functions, so the rank drops.
F2 = FieldDescriptor.gf(2)
col2 = FunctionColumn(tuple(compile_function(e, ["x"], F2) for e in ["x", "x^2"]), F2)
print("rank over GF(2):", system_rank(col2, CandidatePool((0, 1))).rank)
