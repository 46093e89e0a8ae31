"""LUR-with-LOOs and correlation-matrix (CM) separability criteria."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .loo import GeneratorSet, LOOPair, gellmann
from .qstate import DensityMatrix, DimensionMismatch, partial_trace_a, partial_trace_b
from .rearrange import TOL_DETECT, trace_norm


class BlochError(ValueError):
    pass


@dataclass(frozen=True)
class CriterionResult:
    value: float
    threshold: float
    detected: bool
    detail: dict = field(default_factory=dict)


def expectation(rho: DensityMatrix, obs) -> float:
    obs = np.asarray(obs)
    if obs.shape != rho.mat.shape:
        raise DimensionMismatch(f"observable shape {obs.shape} vs state {rho.mat.shape}")
    return float(np.real(np.einsum("ab,ba->", rho.mat, obs)))


def variance(rho: DensityMatrix, obs) -> float:
    """``<M^2> - <M>^2``; tiny negative rounding is clamped to zero."""
    obs = np.asarray(obs)
    mean = expectation(rho, obs)
    var = expectation(rho, obs @ obs) - mean * mean
    return max(var, 0.0) if var > -1e-10 else var


def local_expectations(rho_local: np.ndarray, ops: np.ndarray) -> np.ndarray:
    return np.real(np.einsum("ab,iba->i", rho_local, ops))


def correlations(rho: DensityMatrix, ops_a: np.ndarray, ops_b: np.ndarray) -> np.ndarray:
    """``C[i, j] = <A_i (x) B_j>`` for stacks of local operators."""
    m, n = rho.m, rho.n
    r = rho.mat.reshape(m, n, m, n)
    return np.real(np.einsum("ikjl,xji,ylk->xy", r, ops_a, ops_b, optimize=True))


def _paired_correlations(rho: DensityMatrix, pair: LOOPair) -> np.ndarray:
    m, n = rho.m, rho.n
    r = rho.mat.reshape(m, n, m, n)
    return np.real(np.einsum("ikjl,xji,xlk->x", r, pair.a, pair.b, optimize=True))


def _check_pair(rho: DensityMatrix, pair: LOOPair):
    if pair.dims != rho.dims:
        raise DimensionMismatch(f"LOO pair dims ({pair.dims.m}, {pair.dims.n}) vs state ({rho.m}, {rho.n})")


def lurs_sum(rho: DensityMatrix, pair: LOOPair) -> float:
    """``sum_i Var(A_i (x) I + I (x) B_i)`` via ``sum G_i^2 = d I``.

    Equal to ``m + n + 2 sum <A_i B_i> - sum (<A_i> + <B_i>)^2``.
    """
    _check_pair(rho, pair)
    ea = local_expectations(partial_trace_b(rho), pair.a)
    eb = local_expectations(partial_trace_a(rho), pair.b)
    ab = _paired_correlations(rho, pair)
    return float(rho.m + rho.n + 2.0 * ab.sum() - np.sum((ea + eb) ** 2))


def lurs_sum_direct(rho: DensityMatrix, pair: LOOPair) -> float:
    """The same sum, one full variance at a time."""
    _check_pair(rho, pair)
    ia, ib = np.eye(rho.m), np.eye(rho.n)
    return float(sum(variance(rho, np.kron(a, ib) + np.kron(ia, b)) for a, b in zip(pair.a, pair.b)))


def lurs_threshold(m: int, n: int) -> float:
    return float(m + n - 2)


def lurs_value(rho: DensityMatrix, pair: LOOPair) -> CriterionResult:
    value = lurs_sum(rho, pair)
    threshold = lurs_threshold(rho.m, rho.n)
    return CriterionResult(value, threshold, value < threshold - TOL_DETECT, {"pair": pair})


@dataclass(frozen=True, eq=False)
class BlochDecomposition:
    r: np.ndarray
    s: np.ndarray
    t: np.ndarray
    gens_a: GeneratorSet
    gens_b: GeneratorSet

    def reconstruct(self) -> np.ndarray:
        la, lb = self.gens_a.generators, self.gens_b.generators
        m, n = self.gens_a.dim, self.gens_b.dim
        ia, ib = np.eye(m), np.eye(n)
        mat = np.kron(ia, ib).astype(np.complex128)
        mat += np.kron(np.einsum("i,iab->ab", self.r, la), ib)
        mat += np.kron(ia, np.einsum("j,jab->ab", self.s, lb))
        mat += np.einsum("ij,iab,jcd->acbd", self.t, la, lb).reshape(m * n, m * n)
        return mat / (m * n)


def _real(x: np.ndarray, what: str) -> np.ndarray:
    resid = float(np.max(np.abs(np.imag(x)))) if x.size else 0.0
    if resid > 1e-10:
        raise BlochError(f"{what} has imaginary residue {resid:.1e}")
    return np.real(x).copy()


def bloch(rho: DensityMatrix) -> BlochDecomposition:
    m, n = rho.m, rho.n
    ga, gb = gellmann(m), gellmann(n)
    la, lb = ga.generators, gb.generators
    r = (m / 2) * np.einsum("ab,iba->i", partial_trace_b(rho), la)
    s = (n / 2) * np.einsum("ab,iba->i", partial_trace_a(rho), lb)
    t = (m * n / 4) * np.einsum("ikjl,xji,ylk->xy", rho.mat.reshape(m, n, m, n), la, lb, optimize=True)
    return BlochDecomposition(_real(r, "r"), _real(s, "s"), _real(t, "T"), ga, gb)


def k_mn(m: int, n: int) -> float:
    """Largest correlation-matrix trace norm a separable m x n state can have."""
    return math.sqrt(m * n * (m - 1) * (n - 1)) / 2.0


def cm_value(rho: DensityMatrix) -> CriterionResult:
    t = bloch(rho).t
    value = trace_norm(t)
    threshold = k_mn(rho.m, rho.n)
    return CriterionResult(value, threshold, value > threshold + TOL_DETECT, {"T": t})
