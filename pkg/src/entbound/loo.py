"""Local orthogonal observables (LOOs) and SU(d) generators.

A LOO set on a d-dimensional system is an orthonormal basis of the real
space of Hermitian d x d matrices under ``<X, Y> = Tr(X Y)``; it has d^2
elements and satisfies ``sum_i G_i^2 = d * I``.

Element order for the standard set is fixed: all ``g_j`` ascending, then the
symmetric ``g_jk^+`` in lexicographic ``(j, k)`` order, then the
antisymmetric ``g_jk^-`` in the same order. Generators follow the same
pattern (``w_l``, ``u_jk``, ``v_jk``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space

from .qstate import BipartiteDims, SchmidtDecomposition

TOL_ORTH = 1e-10
TOL_COMPLETE = 1e-9
_SQ2 = math.sqrt(2.0)


class BadBasis(ValueError):
    pass


class NotOrthogonal(ValueError):
    pass


class DimMismatch(ValueError):
    pass


class InvalidLOOSet(ValueError):
    pass


def _pairs(d: int) -> list[tuple[int, int]]:
    return [(j, k) for j in range(d) for k in range(j + 1, d)]


def standard_labels(d: int) -> list[tuple]:
    return [("g", j) for j in range(d)] + [("+",) + p for p in _pairs(d)] + [("-",) + p for p in _pairs(d)]


def gram(ops: np.ndarray) -> np.ndarray:
    """Hilbert-Schmidt Gram matrix ``Tr(G_i G_j)`` of a Hermitian stack."""
    return np.einsum("iab,jba->ij", ops, ops)


@dataclass(frozen=True, eq=False)
class LOOSet:
    dim: int
    observables: np.ndarray  # (d^2, d, d)
    labels: tuple = ()

    def __post_init__(self):
        d = self.dim
        if self.observables.shape != (d * d, d, d):
            raise InvalidLOOSet(f"expected {d * d} observables of size {d}x{d}, got shape {self.observables.shape}")

    def __len__(self) -> int:
        return self.dim * self.dim

    def __iter__(self):
        return iter(self.observables)

    def orthonormality_error(self) -> float:
        return float(np.max(np.abs(gram(self.observables) - np.eye(len(self)))))

    def completeness_error(self) -> float:
        sq = np.einsum("iab,ibc->ac", self.observables, self.observables)
        return float(np.max(np.abs(sq - self.dim * np.eye(self.dim))))

    def hermiticity_error(self) -> float:
        g = self.observables
        return float(np.max(np.abs(g - g.conj().transpose(0, 2, 1))))

    def check(self) -> LOOSet:
        """Raise InvalidLOOSet unless every LOO invariant holds."""
        problems = []
        if self.hermiticity_error() > TOL_ORTH:
            problems.append(f"non-Hermitian element ({self.hermiticity_error():.1e})")
        if self.orthonormality_error() > TOL_ORTH:
            problems.append(f"not orthonormal ({self.orthonormality_error():.1e})")
        if self.completeness_error() > TOL_COMPLETE:
            problems.append(f"sum of squares != d*I ({self.completeness_error():.1e})")
        if problems:
            raise InvalidLOOSet(", ".join(problems))
        return self


@dataclass(frozen=True, eq=False)
class LOOPair:
    """Positionally paired LOOs for subsystems A (m) and B (n).

    ``a`` holds n^2 entries; when m < n the entries beyond the m^2 genuine
    observables are zero matrices. ``active`` marks the genuine ones.
    """

    dims: BipartiteDims
    a: np.ndarray  # (n^2, m, m)
    b: np.ndarray  # (n^2, n, n)
    active: np.ndarray  # bool, (n^2,)
    name: str = ""

    def __post_init__(self):
        m, n = self.dims.m, self.dims.n
        if self.a.shape != (n * n, m, m) or self.b.shape != (n * n, n, n):
            raise DimMismatch(f"pair shapes {self.a.shape}, {self.b.shape} do not fit dims ({m}, {n})")
        if int(self.active.sum()) != m * m:
            raise DimMismatch(f"pair has {int(self.active.sum())} active A-side entries, expected {m * m}")
        if np.any(self.a[~self.active] != 0):
            raise InvalidLOOSet("padding entries of the A side must be zero")

    @property
    def set_a(self) -> LOOSet:
        return LOOSet(self.dims.m, self.a[self.active])

    @property
    def set_b(self) -> LOOSet:
        return LOOSet(self.dims.n, self.b)

    def check(self) -> LOOPair:
        self.set_a.check()
        self.set_b.check()
        return self


@dataclass(frozen=True, eq=False)
class GeneratorSet:
    dim: int
    generators: np.ndarray  # (d^2 - 1, d, d)
    labels: tuple = ()


def _unitary_basis(basis, d: int) -> np.ndarray:
    if basis is None:
        return np.eye(d, dtype=np.complex128)
    basis = np.asarray(basis, dtype=np.complex128)
    if basis.shape != (d, d):
        raise BadBasis(f"basis must be {d}x{d}, got {basis.shape}")
    err = np.max(np.abs(basis.conj().T @ basis - np.eye(d)))
    if err > TOL_ORTH:
        raise BadBasis(f"basis columns not orthonormal ({err:.1e})")
    return basis


def _standard_ops(u: np.ndarray) -> np.ndarray:
    d = u.shape[0]
    cols = [u[:, j] for j in range(d)]
    ops = [np.outer(c, c.conj()) for c in cols]
    for j, k in _pairs(d):
        ops.append((np.outer(cols[j], cols[k].conj()) + np.outer(cols[k], cols[j].conj())) / _SQ2)
    for j, k in _pairs(d):
        ops.append(-1j * (np.outer(cols[j], cols[k].conj()) - np.outer(cols[k], cols[j].conj())) / _SQ2)
    return np.array(ops)


def standard_loos(d: int, basis=None) -> LOOSet:
    """The standard LOO set ``{g_j, g_jk^+, g_jk^-}`` built on ``basis``.

    ``basis`` is a d x d matrix whose columns are the orthonormal vectors
    ``|j>``; the computational basis is used when omitted.
    """
    if d < 2:
        raise BadBasis("dimension must be >= 2")
    return LOOSet(d, _standard_ops(_unitary_basis(basis, d)), tuple(standard_labels(d)))


def gellmann(d: int) -> GeneratorSet:
    """Traceless SU(d) generators ``{w_l, u_jk, v_jk}`` with ``Tr(l_i l_j) = 2 delta_ij``."""
    if d < 2:
        raise BadBasis("dimension must be >= 2")
    gens = []
    for l in range(d - 1):
        diag = np.zeros(d)
        diag[: l + 1] = 1.0
        diag[l + 1] = -(l + 1)
        gens.append(np.diag(diag).astype(np.complex128) * math.sqrt(2.0 / ((l + 1) * (l + 2))))
    std = _standard_ops(np.eye(d, dtype=np.complex128))[d:]
    gens.extend(_SQ2 * std)
    labels = [("w", l) for l in range(d - 1)] + [("u",) + p for p in _pairs(d)] + [("v",) + p for p in _pairs(d)]
    return GeneratorSet(d, np.array(gens), tuple(labels))


def rotate(loos: LOOSet, o) -> LOOSet:
    """``G'_i = sum_j o[i, j] G_j`` for a real orthogonal ``o``."""
    o = np.asarray(o, dtype=float)
    k = len(loos)
    if o.shape != (k, k):
        raise NotOrthogonal(f"rotation must be {k}x{k}, got {o.shape}")
    err = np.max(np.abs(o @ o.T - np.eye(k)))
    if err > TOL_ORTH:
        raise NotOrthogonal(f"o o^T deviates from identity by {err:.1e}")
    return LOOSet(loos.dim, np.einsum("ij,jab->iab", o, loos.observables))


def random_orthogonal(dim: int, seed) -> np.ndarray:
    """Haar orthogonal matrix from a seeded Gaussian QR (R diagonal forced positive)."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    q, r = np.linalg.qr(rng.normal(size=(dim, dim)))
    return q * np.sign(np.where(np.diag(r) == 0, 1.0, np.diag(r)))


def _label_paired(ua: np.ndarray, ub: np.ndarray, signs: tuple[float, float, float], name: str) -> LOOPair:
    """Pair standard LOOs on A and B by label, B side scaled by per-kind signs."""
    m, n = ua.shape[0], ub.shape[0]
    ops_a = dict(zip(standard_labels(m), _standard_ops(ua)))
    ops_b = dict(zip(standard_labels(n), _standard_ops(ub)))
    sign = {"g": signs[0], "+": signs[1], "-": signs[2]}
    order = standard_labels(m) + [lab for lab in standard_labels(n) if lab not in ops_a]
    a = np.array([ops_a.get(lab, np.zeros((m, m), dtype=np.complex128)) for lab in order])
    b = np.array([sign[lab[0]] * ops_b[lab] for lab in order])
    active = np.array([lab in ops_a for lab in order])
    return LOOPair(BipartiteDims(m, n), a, b, active, name)


def complete_basis(vectors: np.ndarray) -> np.ndarray:
    """Extend orthonormal columns (n x k) to an n x n unitary."""
    n, k = vectors.shape
    if k == n:
        return np.asarray(vectors, dtype=np.complex128)
    rest = null_space(vectors.conj().T)
    return np.hstack([vectors, rest]).astype(np.complex128)


def lemma1_pair(sd: SchmidtDecomposition, dims: BipartiteDims) -> LOOPair:
    """Pair that makes the pure-state LUR sum equal ``m+n-2-4 sum_{j<k} sqrt(mu_j mu_k)``.

    A side: ``{g_j, g_jk^+, g_jk^-}`` on the A Schmidt basis. B side:
    ``{-g_j, -g_jk^+, g_jk^-}`` on the B Schmidt basis (completed to n
    vectors). B elements whose labels have no A counterpart pair with zero.
    """
    ua = np.asarray(sd.basis_a, dtype=np.complex128)
    ub = complete_basis(np.asarray(sd.basis_b, dtype=np.complex128))
    if ua.shape != (dims.m, dims.m) or ub.shape != (dims.n, dims.n):
        raise DimMismatch("Schmidt bases do not match dims")
    return _label_paired(ua, ub, (-1.0, -1.0, 1.0), "lemma1")


def standard_pair(dims: BipartiteDims, signs: tuple[float, float, float] = (1.0, 1.0, 1.0)) -> LOOPair:
    """Computational-basis standard LOOs paired by label."""
    ua = np.eye(dims.m, dtype=np.complex128)
    ub = np.eye(dims.n, dtype=np.complex128)
    tag = "".join("+" if s > 0 else "-" for s in signs)
    return _label_paired(ua, ub, signs, f"standard{tag}")


def isotropic_pair(m: int, n: int) -> LOOPair:
    if m != n:
        raise DimMismatch(f"isotropic pair needs m == n, got ({m}, {n})")
    gens = gellmann(m)
    nw = m - 1
    ident = np.eye(m, dtype=np.complex128)
    a = np.concatenate([ident[None] / math.sqrt(m), gens.generators / _SQ2])
    sign = np.ones(m * m)
    sign[: 1 + nw] = -1.0
    sign[1 + nw : 1 + nw + len(_pairs(m))] = -1.0
    b = a * sign[:, None, None]
    return LOOPair(BipartiteDims(m, n), a, b, np.ones(m * m, dtype=bool), "isotropic")


def pair_from_sets(set_a: LOOSet, set_b: LOOSet, name: str = "explicit") -> LOOPair:
    """Positional pairing: ``set_a[i]`` with ``set_b[i]``; A padded with zeros."""
    m, n = set_a.dim, set_b.dim
    if m > n:
        raise DimMismatch("A side must be the smaller subsystem")
    pad = np.zeros((n * n - m * m, m, m), dtype=np.complex128)
    active = np.arange(n * n) < m * m
    return LOOPair(BipartiteDims(m, n), np.concatenate([set_a.observables, pad]), set_b.observables.copy(), active, name)


def rotate_pair(pair: LOOPair, oa, ob, name: str | None = None) -> LOOPair:
    """Rotate the genuine A entries by ``oa`` (m^2 x m^2) and all B entries by ``ob``."""
    a = pair.a.copy()
    a[pair.active] = rotate(pair.set_a, oa).observables
    b = rotate(pair.set_b, ob).observables
    return LOOPair(pair.dims, a, b, pair.active.copy(), pair.name if name is None else name)
