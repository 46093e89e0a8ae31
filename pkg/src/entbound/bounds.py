"""Concurrence lower bounds and a convex-roof upper estimate.

Three lower bounds are provided, each driven by how strongly a separability
criterion is violated:

* ``caf_bound``   -- PPT / realignment trace norms,
* ``lurs_bound``  -- local uncertainty relations with a chosen LOO pair,
* ``cm_bound``    -- the trace norm of the Bloch correlation matrix.

Raw values may be negative (criterion not violated); reports keep them and
clamp a copy to ``[0, sqrt(2(m-1)/m)]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .criteria import cm_value, k_mn, lurs_sum, lurs_threshold
from .loo import LOOPair, isotropic_pair, lemma1_pair, standard_pair
from .qstate import DensityMatrix, dominant_vector, max_concurrence, schmidt
from .rearrange import ccnr_value, ppt_value


def clamp(raw: float, m: int) -> float:
    if not raw > 0.0:
        return 0.0
    return min(raw, max_concurrence(m))


def caf_from_norm(norm: float, m: int) -> float:
    return math.sqrt(2.0 / (m * (m - 1))) * (norm - 1.0)


def caf_bound(rho: DensityMatrix) -> float:
    return caf_from_norm(max(ppt_value(rho), ccnr_value(rho)), rho.m)


def lurs_bound_from_value(value: float, m: int, n: int) -> float:
    return (lurs_threshold(m, n) - value) / math.sqrt(2.0 * m * (m - 1))


def lurs_bound(rho: DensityMatrix, pair: LOOPair) -> float:
    return lurs_bound_from_value(lurs_sum(rho, pair), rho.m, rho.n)


def cm_bound_from_norm(norm: float, m: int, n: int) -> float:
    return math.sqrt(8.0 / (m**3 * n**2 * (m - 1))) * (norm - k_mn(m, n))


def cm_bound(rho: DensityMatrix) -> float:
    return cm_bound_from_norm(cm_value(rho).value, rho.m, rho.n)


def closest_pure_pair(rho: DensityMatrix) -> LOOPair:
    """Equality-attaining pair for the dominant eigenvector of rho."""
    return lemma1_pair(schmidt(dominant_vector(rho)), rho.dims)


def schmidt_inequality_check(mu, tol: float = 1e-12) -> bool:
    """``sum_{j<k} mu_j mu_k >= 2/(M(M-1)) (sum_{j<k} sqrt(mu_j mu_k))^2``."""
    mu = np.asarray(mu, dtype=float)
    mdim = mu.size
    if mdim < 2:
        return True
    s = np.sqrt(np.clip(mu, 0.0, None))
    iu = np.triu_indices(mdim, 1)
    lhs = float(np.sum(np.outer(mu, mu)[iu]))
    rhs = 2.0 / (mdim * (mdim - 1)) * float(np.sum(np.outer(s, s)[iu])) ** 2
    return lhs >= rhs - tol


@dataclass
class BoundReport:
    m: int
    n: int
    ppt_value: float
    ccnr_value: float
    cm_norm: float
    cm_threshold: float
    lurs_value: float
    lurs_threshold: float
    caf_raw: float
    lurs_raw: float
    cm_raw: float
    pair: LOOPair | None = None
    notes: dict = field(default_factory=dict)

    @property
    def caf(self) -> float:
        return clamp(self.caf_raw, self.m)

    @property
    def lurs(self) -> float:
        return clamp(self.lurs_raw, self.m)

    @property
    def cm(self) -> float:
        return clamp(self.cm_raw, self.m)

    @property
    def ppt_bound(self) -> float:
        return clamp(caf_from_norm(self.ppt_value, self.m), self.m)

    @property
    def ccnr_bound(self) -> float:
        return clamp(caf_from_norm(self.ccnr_value, self.m), self.m)

    @property
    def best(self) -> float:
        return max(self.caf, self.lurs, self.cm)


def resolve_pair(rho: DensityMatrix, loo="lemma1", config=None) -> tuple[LOOPair, dict]:
    """Turn a LOO strategy into a concrete pair.

    ``loo`` is a LOOPair or one of ``"lemma1"`` (dominant eigenvector),
    ``"standard"``, ``"isotropic"``, ``"optimize"``.
    """
    if isinstance(loo, LOOPair):
        return loo, {"lurs": "explicit pair"}
    if loo == "lemma1":
        return closest_pure_pair(rho), {"lurs": "lemma1 pair of the dominant eigenvector"}
    if loo == "standard":
        return standard_pair(rho.dims), {"lurs": "standard LOOs paired by label"}
    if loo == "isotropic":
        return isotropic_pair(rho.m, rho.n), {"lurs": "isotropic pair"}
    if loo == "optimize":
        from .optimizer import OptimizerConfig, optimize_loos

        res = optimize_loos(rho, config or OptimizerConfig())
        return res.pair, {"lurs": f"optimized pair (seed {res.config.seed}, {res.config.restarts} restarts)"}
    raise ValueError(f"unknown LOO strategy {loo!r}")


def best_bound(rho: DensityMatrix, loo="lemma1", config=None) -> BoundReport:
    pair, notes = resolve_pair(rho, loo, config)
    m, n = rho.m, rho.n
    ppt, ccnr = ppt_value(rho), ccnr_value(rho)
    cm = cm_value(rho)
    lv = lurs_sum(rho, pair)
    notes = {"caf": "max(PPT, CCNR) trace norm", "cm": "Bloch correlation matrix trace norm", **notes}
    if rho.swapped:
        notes["swap"] = "subsystems relabelled so that m <= n"
    return BoundReport(
        m=m,
        n=n,
        ppt_value=ppt,
        ccnr_value=ccnr,
        cm_norm=cm.value,
        cm_threshold=cm.threshold,
        lurs_value=lv,
        lurs_threshold=lurs_threshold(m, n),
        caf_raw=caf_from_norm(max(ppt, ccnr), m),
        lurs_raw=lurs_bound_from_value(lv, m, n),
        cm_raw=cm_bound_from_norm(cm.value, m, n),
        pair=pair,
        notes=notes,
    )


def _haar_unitaries(count: int, size: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.normal(size=(count, size, size)) + 1j * rng.normal(size=(count, size, size))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=1, axis2=2)
    return q * (d / np.abs(d))[:, None, :]


def upper_estimate(rho: DensityMatrix, trials: int = 200, seed: int = 0, extra: int = 2, trace: bool = False):
    """Smallest average concurrence over sampled ensembles realising rho.

    Ensembles are ``|psi~_e> = sum_k U[e, k] sqrt(lambda_k) |e_k>`` for Haar
    unitaries U of size ``rank + extra``; the spectral ensemble itself is the
    first candidate. Every candidate realises rho, so each value bounds the
    convex roof from above. With ``trace=True`` the running minimum after
    each trial is returned as well.
    """
    w, v = np.linalg.eigh(rho.mat)
    keep = w > 1e-13
    vecs = v[:, keep] * np.sqrt(w[keep])  # (d, r)
    rank = vecs.shape[1]
    size = rank + extra
    base = np.zeros((rho.m * rho.n, size), dtype=np.complex128)
    base[:, :rank] = vecs
    rng = np.random.default_rng(seed)
    us = _haar_unitaries(trials, size, rng) if trials > 0 else np.zeros((0, size, size), dtype=np.complex128)
    members = np.einsum("ek,tlk->tle", base, us)  # (trials, size, d)
    spectral = base.T[None]
    values = kernels.ensemble_concurrence(np.concatenate([spectral, members]), rho.m, rho.n)
    running = np.minimum.accumulate(values)
    best = float(running[-1])
    return (best, running) if trace else best
