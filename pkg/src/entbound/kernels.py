"""Hot numeric kernels with a compiled and a pure-numpy implementation.

Each public kernel dispatches on :data:`entbound._accel.USE_NUMBA` (the
index shuffles additionally only for ``m*n >= SHUFFLE_MIN_DIM``). Both
paths are importable directly (``*_nb`` / ``*_np``) so tests and the
benchmark can compare them.
"""
from __future__ import annotations

import numpy as np

from . import _accel
from ._accel import njit

# --------------------------------------------------------------------------
# index shuffles


@njit
def partial_transpose_nb(mat, m, n):
    out = np.empty_like(mat)
    for i in range(m):
        for k in range(n):
            for j in range(m):
                for l in range(n):
                    out[i * n + k, j * n + l] = mat[j * n + k, i * n + l]
    return out


def partial_transpose_np(mat, m, n):
    return np.ascontiguousarray(mat.reshape(m, n, m, n).transpose(2, 1, 0, 3).reshape(m * n, m * n))


@njit
def realign_nb(mat, m, n):
    out = np.empty((m * m, n * n), dtype=mat.dtype)
    for i in range(m):
        for j in range(m):
            for k in range(n):
                for l in range(n):
                    out[i * m + j, k * n + l] = mat[i * n + k, j * n + l]
    return out


def realign_np(mat, m, n):
    return np.ascontiguousarray(mat.reshape(m, n, m, n).transpose(0, 2, 1, 3).reshape(m * m, n * n))


# Below this total dimension the reshape/transpose route is as fast as the
# compiled loop, and loading or compiling the loop costs 0.2-1 s per process.
SHUFFLE_MIN_DIM = 64


def partial_transpose(mat: np.ndarray, m: int, n: int) -> np.ndarray:
    mat = np.ascontiguousarray(mat, dtype=np.complex128)
    if _accel.USE_NUMBA and m * n >= SHUFFLE_MIN_DIM:
        return partial_transpose_nb(mat, m, n)
    return partial_transpose_np(mat, m, n)


def realign(mat: np.ndarray, m: int, n: int) -> np.ndarray:
    mat = np.ascontiguousarray(mat, dtype=np.complex128)
    if _accel.USE_NUMBA and m * n >= SHUFFLE_MIN_DIM:
        return realign_nb(mat, m, n)
    return realign_np(mat, m, n)


# --------------------------------------------------------------------------
# orthogonal-group hill climbing


def _expm_antisym(k):
    # scaling and squaring with a degree-12 Taylor polynomial; exact enough
    # for the small-angle generators used here and numba-compatible
    d = k.shape[0]
    norm = np.sqrt(np.sum(k * k))
    squarings = 0
    while norm > 0.25:
        norm *= 0.5
        squarings += 1
    a = k / (2.0 ** squarings)
    out = np.eye(d)
    term = np.eye(d)
    for p in range(1, 13):
        term = term @ a / p
        out = out + term
    for _ in range(squarings):
        out = out @ out
    return out


expm_antisym_nb = njit(_expm_antisym)
expm_antisym_np = _expm_antisym


@njit
def hill_climb_nb(d, oa, ob, kicks_a, kicks_b, initial_step, decay, patience):
    best = np.trace(oa @ d @ ob.T)
    step = initial_step
    streak = 0
    accepted = 0
    for t in range(kicks_a.shape[0]):
        na = expm_antisym_nb(step * kicks_a[t]) @ oa
        nb = expm_antisym_nb(step * kicks_b[t]) @ ob
        val = np.trace(na @ d @ nb.T)
        if val < best:
            best = val
            oa = na
            ob = nb
            accepted += 1
            streak = 0
        else:
            streak += 1
            if streak >= patience:
                step *= decay
                streak = 0
    return oa, ob, best, accepted


# same loop over the uncompiled expm; kept as a separate definition because
# numba cannot cache a closure, and compilation otherwise dominates a run
def hill_climb_np(d, oa, ob, kicks_a, kicks_b, initial_step, decay, patience):
    best = np.trace(oa @ d @ ob.T)
    step = initial_step
    streak = 0
    accepted = 0
    for t in range(kicks_a.shape[0]):
        na = expm_antisym_np(step * kicks_a[t]) @ oa
        nb = expm_antisym_np(step * kicks_b[t]) @ ob
        val = np.trace(na @ d @ nb.T)
        if val < best:
            best = val
            oa = na
            ob = nb
            accepted += 1
            streak = 0
        else:
            streak += 1
            if streak >= patience:
                step *= decay
                streak = 0
    return oa, ob, best, accepted


def hill_climb(d, oa, ob, kicks_a, kicks_b, initial_step, decay, patience):
    """Minimise ``Tr(O_A D O_B^T)`` by accept-if-better left rotations.

    ``kicks_a[t]`` / ``kicks_b[t]`` are unit-norm antisymmetric generators;
    step ``t`` proposes ``O <- expm(step * kick) @ O`` on both sides at once.
    After ``patience`` consecutive rejections the step is multiplied by
    ``decay``. Returns ``(O_A, O_B, objective, n_accepted)``.
    """
    args = (
        np.ascontiguousarray(d, dtype=np.float64),
        np.ascontiguousarray(oa, dtype=np.float64),
        np.ascontiguousarray(ob, dtype=np.float64),
        np.ascontiguousarray(kicks_a, dtype=np.float64),
        np.ascontiguousarray(kicks_b, dtype=np.float64),
        float(initial_step),
        float(decay),
        int(patience),
    )
    if _accel.USE_NUMBA:
        oa, ob, best, accepted = hill_climb_nb(*args)
    else:
        oa, ob, best, accepted = hill_climb_np(*args)
    return oa, ob, float(best), int(accepted)


# --------------------------------------------------------------------------
# ensemble concurrence (convex-roof upper estimate)


@njit
def ensemble_concurrence_nb(vecs, m, n):
    # vecs: (trials, L, m*n) unnormalised ensemble members; returns sum_n p_n C(psi_n) per trial
    trials, length, _ = vecs.shape
    out = np.zeros(trials)
    for t in range(trials):
        total = 0.0
        for e in range(length):
            x = vecs[t, e].reshape(m, n)
            p = 0.0
            for i in range(m):
                for k in range(n):
                    p += x[i, k].real ** 2 + x[i, k].imag ** 2
            if p <= 0.0:
                continue
            red = x @ np.conj(x).T
            pur = 0.0
            for i in range(m):
                for j in range(m):
                    pur += red[i, j].real ** 2 + red[i, j].imag ** 2
            val = 2.0 * (p * p - pur)
            if val > 0.0:
                total += np.sqrt(val)
        out[t] = total
    return out


def ensemble_concurrence_np(vecs, m, n):
    trials, length, _ = vecs.shape
    x = vecs.reshape(trials, length, m, n)
    p = np.einsum("tlik,tlik->tl", x, x.conj()).real
    red = np.einsum("tlik,tljk->tlij", x, x.conj())
    pur = np.einsum("tlij,tlij->tl", red, red.conj()).real
    return np.sqrt(np.clip(2.0 * (p * p - pur), 0.0, None)).sum(axis=1)


def ensemble_concurrence(vecs: np.ndarray, m: int, n: int) -> np.ndarray:
    """Average pure-state concurrence of each trial's ensemble.

    ``vecs[t, e]`` is the unnormalised member ``sqrt(p_e) |psi_e>``, so the
    weighted concurrence is ``sqrt(2 (p_e^2 - Tr(X X^dag)^2))``.
    """
    vecs = np.ascontiguousarray(vecs, dtype=np.complex128)
    if _accel.USE_NUMBA:
        return ensemble_concurrence_nb(vecs, m, n)
    return ensemble_concurrence_np(vecs, m, n)
