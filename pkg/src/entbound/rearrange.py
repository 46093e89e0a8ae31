"""Partial transpose, realignment and the trace norm."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from . import kernels
from .qstate import BipartiteDims, DensityMatrix

TOL_DETECT = 1e-9


@dataclass(frozen=True, eq=False)
class RearrangedMatrix:
    kind: Literal["partial_transpose", "realignment"]
    mat: np.ndarray
    source_dims: BipartiteDims


def partial_transpose(rho: DensityMatrix) -> RearrangedMatrix:
    """Transpose on subsystem A: ``(T_A rho)[(i,k),(j,l)] = rho[(j,k),(i,l)]``."""
    return RearrangedMatrix("partial_transpose", kernels.partial_transpose(rho.mat, rho.m, rho.n), rho.dims)


def realign(rho: DensityMatrix) -> RearrangedMatrix:
    """Realigned matrix ``R[(i,j),(k,l)] = rho[(i,k),(j,l)]`` of shape m^2 x n^2.

    Row ``(i, j)`` is the row-major vectorisation of the n x n block
    ``B_ij`` of rho.
    """
    return RearrangedMatrix("realignment", kernels.realign(rho.mat, rho.m, rho.n), rho.dims)


def trace_norm(mat, hermitian: bool = False) -> float:
    """Sum of singular values.

    With ``hermitian=True`` the sum of absolute eigenvalues is used instead,
    which is cheaper and agrees with the SVD route to rounding.
    """
    mat = np.asarray(mat)
    if hermitian:
        return float(np.sum(np.abs(np.linalg.eigvalsh(mat))))
    return float(np.sum(np.linalg.svd(mat, compute_uv=False)))


def ppt_value(rho: DensityMatrix) -> float:
    return trace_norm(partial_transpose(rho).mat, hermitian=True)


def ccnr_value(rho: DensityMatrix) -> float:
    return trace_norm(realign(rho).mat)


def ppt_detects(rho: DensityMatrix) -> bool:
    return ppt_value(rho) > 1.0 + TOL_DETECT


def ccnr_detects(rho: DensityMatrix) -> bool:
    return ccnr_value(rho) > 1.0 + TOL_DETECT
