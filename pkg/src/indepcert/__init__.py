"""Certified linear independence and rank of function systems.

Functions are sampled at points of a finite candidate pool.  Generalized
forward elimination either produces points ``x`` with a nonsingular sample
matrix ``[f_i(x_j)]`` (and a triangular factorization proving it), or a
coefficient vector under which the functions cancel on the whole pool.
"""

__version__ = "0.1.0"

from .elimination import (
    DependenceWitness,
    EliminationStep,
    IndependenceCertificate,
    certify_independence,
    elimination_step,
    find_pivot,
    verify_certificate,
    witness_check,
)
from .field import FieldDescriptor, invert, is_effectively_zero
from .funcsys import (
    CandidatePool,
    FunctionColumn,
    FunctionHandle,
    SampleMatrix,
    apply_transform,
    sample_matrix,
)
from .kernel import (
    InterpolationPoints,
    KernelSampler,
    SeparableKernel,
    recover_factors,
    reconstruction_residual,
    reduce_representation,
    select_interpolation_points,
)
from .rank import RankResult, brute_force_rank, system_rank

__all__ = [
    "CandidatePool",
    "DependenceWitness",
    "EliminationStep",
    "FieldDescriptor",
    "FunctionColumn",
    "FunctionHandle",
    "IndependenceCertificate",
    "InterpolationPoints",
    "KernelSampler",
    "RankResult",
    "SampleMatrix",
    "SeparableKernel",
    "apply_transform",
    "brute_force_rank",
    "certify_independence",
    "elimination_step",
    "find_pivot",
    "invert",
    "is_effectively_zero",
    "recover_factors",
    "reconstruction_residual",
    "reduce_representation",
    "sample_matrix",
    "select_interpolation_points",
    "system_rank",
    "verify_certificate",
    "witness_check",
]
