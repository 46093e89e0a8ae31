"""Bipartite states: validation, constructors, partial traces, Schmidt form.

Basis convention: ``|i>_A (x) |k>_B`` is row ``i*n + k``. All bound formulas
assume ``m <= n``; inputs with ``m > n`` are relabelled (A <-> B) on
construction and the swap is recorded on the object.
"""
from __future__ import annotations

import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass

import numpy as np

TOL_HERM = 1e-9
TOL_TRACE = 1e-9
TOL_NORM = 1e-9
TOL_PSD = 1e-8


class DimensionMismatch(ValueError):
    pass


class InvalidState(ValueError):
    """A matrix failed one or more density-matrix invariants.

    ``violations`` lists every failed check, not only the one that named the
    exception class.
    """

    def __init__(self, violations: list[Violation]):
        self.violations = violations
        super().__init__("; ".join(str(v) for v in violations))


class NotHermitian(InvalidState):
    pass


class TraceNotOne(InvalidState):
    pass


class NotPSD(InvalidState):
    pass


class UnknownFamily(KeyError):
    pass


class BadParams(ValueError):
    pass


class WeightSumError(ValueError):
    pass


def sci(x: float) -> str:
    """Two-digit scientific notation without exponent padding (``1.0e-1``)."""
    mant, exp = f"{x:.1e}".split("e")
    return f"{mant}e{int(exp)}"


@dataclass(frozen=True)
class Violation:
    kind: str
    magnitude: float

    def __str__(self) -> str:
        return f"{self.kind} {sci(self.magnitude)}"


@dataclass(frozen=True)
class Check:
    """Outcome of one invariant check (pass or fail)."""

    kind: str
    magnitude: float
    tolerance: float

    @property
    def ok(self) -> bool:
        return self.magnitude <= self.tolerance


_EXC_FOR = {"NotHermitian": NotHermitian, "TraceNotOne": TraceNotOne, "NotPSD": NotPSD}


@dataclass(frozen=True)
class BipartiteDims:
    m: int
    n: int

    def __post_init__(self):
        if int(self.m) < 2 or int(self.n) < 2:
            raise DimensionMismatch(f"subsystem dimensions must be >= 2, got ({self.m}, {self.n})")

    @property
    def total(self) -> int:
        return self.m * self.n

    @property
    def canonical(self) -> bool:
        return self.m <= self.n

    def swapped(self) -> BipartiteDims:
        return BipartiteDims(self.n, self.m)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128, copy=True)
    a.setflags(write=False)
    return a


def swap_subsystems(mat: np.ndarray, dims: BipartiteDims) -> np.ndarray:
    """Reorder an operator on A(x)B to act on B(x)A."""
    m, n = dims.m, dims.n
    return mat.reshape(m, n, m, n).transpose(1, 0, 3, 2).reshape(m * n, m * n)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    mat: np.ndarray
    dims: BipartiteDims
    swapped: bool = False

    @property
    def m(self) -> int:
        return self.dims.m

    @property
    def n(self) -> int:
        return self.dims.n

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.mat, dtype=dtype)


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray
    dims: BipartiteDims
    swapped: bool = False

    def __post_init__(self):
        if self.amplitudes.shape != (self.dims.total,):
            raise DimensionMismatch(
                f"amplitude vector has shape {self.amplitudes.shape}, expected ({self.dims.total},)"
            )
        err = abs(np.linalg.norm(self.amplitudes) - 1.0)
        if err > TOL_NORM:
            raise BadParams(f"pure state not normalised (|norm - 1| = {err:.1e})")

    @property
    def matrix(self) -> np.ndarray:
        """Amplitudes reshaped to the m x n coefficient matrix."""
        return self.amplitudes.reshape(self.dims.m, self.dims.n)

    def density(self) -> DensityMatrix:
        psi = self.amplitudes
        return DensityMatrix(_frozen(np.outer(psi, psi.conj())), self.dims, self.swapped)


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    """``psi = sum_j sqrt(mu_j) |a_j>|b_j>``; bases are stored column-wise.

    ``basis_a`` is m x m, ``basis_b`` is n x m (columns orthonormal).
    """

    coefficients: np.ndarray
    basis_a: np.ndarray
    basis_b: np.ndarray

    def reconstruct(self) -> np.ndarray:
        mu = np.sqrt(np.clip(self.coefficients, 0.0, None))
        return np.einsum("j,ij,kj->ik", mu, self.basis_a, self.basis_b).reshape(-1)


def check_density(mat: np.ndarray, dims: BipartiteDims) -> list[Check]:
    """Run every density-matrix invariant and report magnitudes.

    Raises DimensionMismatch for a wrongly shaped matrix; everything else is
    reported, not raised.
    """
    mat = np.asarray(mat)
    d = dims.total
    if mat.shape != (d, d):
        raise DimensionMismatch(f"matrix shape {mat.shape} does not match dims ({dims.m}, {dims.n})")
    herm = float(np.max(np.abs(mat - mat.conj().T))) if d else 0.0
    trace = float(abs(np.trace(mat) - 1.0))
    hmat = (mat + mat.conj().T) / 2
    min_eig = float(np.linalg.eigvalsh(hmat)[0])
    return [
        Check("NotHermitian", herm, TOL_HERM),
        Check("TraceNotOne", trace, TOL_TRACE),
        Check("NotPSD", max(0.0, -min_eig), TOL_PSD),
    ]


def validate_density(mat, dims: BipartiteDims | tuple[int, int]) -> DensityMatrix:
    if not isinstance(dims, BipartiteDims):
        dims = BipartiteDims(*dims)
    mat = np.asarray(mat, dtype=np.complex128)
    failed = [Violation(c.kind, c.magnitude) for c in check_density(mat, dims) if not c.ok]
    if failed:
        raise _EXC_FOR[failed[0].kind](failed)
    if not dims.canonical:
        return DensityMatrix(_frozen(swap_subsystems(mat, dims)), dims.swapped(), swapped=True)
    return DensityMatrix(_frozen(mat), dims)


def pure_state(amplitudes, dims: BipartiteDims | tuple[int, int]) -> PureState:
    if not isinstance(dims, BipartiteDims):
        dims = BipartiteDims(*dims)
    psi = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
    if psi.shape != (dims.total,):
        raise DimensionMismatch(f"{psi.size} amplitudes for dims ({dims.m}, {dims.n})")
    if not dims.canonical:
        psi = psi.reshape(dims.m, dims.n).T.reshape(-1)
        return PureState(_frozen(psi), dims.swapped(), swapped=True)
    return PureState(_frozen(psi), dims)


def partial_trace_b(rho: DensityMatrix) -> np.ndarray:
    m, n = rho.m, rho.n
    return np.einsum("ikjk->ij", rho.mat.reshape(m, n, m, n))


def partial_trace_a(rho: DensityMatrix) -> np.ndarray:
    m, n = rho.m, rho.n
    return np.einsum("ikil->kl", rho.mat.reshape(m, n, m, n))


def schmidt(psi: PureState) -> SchmidtDecomposition:
    u, s, vh = np.linalg.svd(psi.matrix)
    # s is already descending
    return SchmidtDecomposition(s**2, u, vh[: psi.dims.m].T)


def pure_concurrence(psi: PureState) -> float:
    x = psi.matrix
    rho_a = x @ x.conj().T
    purity = float(np.real(np.sum(rho_a * rho_a.conj())))
    return math.sqrt(max(0.0, 2.0 * (1.0 - purity)))


def max_concurrence(m: int) -> float:
    """Largest concurrence attainable with an m-dimensional smaller factor."""
    return math.sqrt(2.0 * (m - 1) / m)


def mix(components: Iterable[tuple[float, DensityMatrix]], tol: float = 1e-9) -> DensityMatrix:
    components = list(components)
    if not components:
        raise WeightSumError("no components to mix")
    weights = np.array([w for w, _ in components], dtype=float)
    if np.any(weights < 0):
        raise WeightSumError("negative mixing weight")
    if abs(weights.sum() - 1.0) > tol:
        raise WeightSumError(f"weights sum to {weights.sum():.12g}")
    dims = components[0][1].dims
    if any(r.dims != dims for _, r in components):
        raise DimensionMismatch("cannot mix states of different dimensions")
    mat = sum(w * r.mat for w, r in components)
    return validate_density(mat, dims)


# --------------------------------------------------------------------------
# state families


def ket(dims: BipartiteDims, i: int, k: int) -> np.ndarray:
    v = np.zeros(dims.total, dtype=np.complex128)
    v[i * dims.n + k] = 1.0
    return v


def phi_plus(m: int, n: int | None = None) -> np.ndarray:
    """``sum_{j<m} |jj> / sqrt(m)`` embedded in m x n."""
    dims = BipartiteDims(m, m if n is None else n)
    return sum(ket(dims, j, j) for j in range(m)) / math.sqrt(m)


def canonical_schmidt(m: int, n: int) -> SchmidtDecomposition:
    """Schmidt form of ``phi_plus(m, n)`` in the computational bases.

    Bypasses the SVD, whose bases are arbitrary for degenerate coefficients.
    """
    return SchmidtDecomposition(np.full(m, 1.0 / m), np.eye(m, dtype=np.complex128), np.eye(n, m, dtype=np.complex128))


def _tiles() -> np.ndarray:
    e = np.eye(3)
    s2 = math.sqrt(2.0)
    plus = e.sum(axis=0) / math.sqrt(3.0)
    vecs = [
        np.kron(e[0], (e[0] - e[1]) / s2),
        np.kron((e[0] - e[1]) / s2, e[2]),
        np.kron(e[2], (e[1] - e[2]) / s2),
        np.kron((e[1] - e[2]) / s2, e[0]),
        np.kron(plus, plus),
    ]
    proj = sum(np.outer(v, v) for v in vecs)
    return (np.eye(9) - proj) / 4.0


def random_pure(dims: BipartiteDims | tuple[int, int], rng: np.random.Generator) -> PureState:
    if not isinstance(dims, BipartiteDims):
        dims = BipartiteDims(*dims)
    z = rng.normal(size=dims.total) + 1j * rng.normal(size=dims.total)
    return pure_state(z / np.linalg.norm(z), dims)


def random_product_pure(dims: BipartiteDims | tuple[int, int], rng: np.random.Generator) -> PureState:
    if not isinstance(dims, BipartiteDims):
        dims = BipartiteDims(*dims)
    a = rng.normal(size=dims.m) + 1j * rng.normal(size=dims.m)
    b = rng.normal(size=dims.n) + 1j * rng.normal(size=dims.n)
    v = np.kron(a, b)
    return pure_state(v / np.linalg.norm(v), dims)


def random_separable(dims: BipartiteDims | tuple[int, int], terms: int, rng: np.random.Generator) -> DensityMatrix:
    """Convex mixture of ``terms`` random pure product states."""
    if not isinstance(dims, BipartiteDims):
        dims = BipartiteDims(*dims)
    weights = rng.dirichlet(np.ones(terms))
    mat = sum(w * random_product_pure(dims, rng).density().mat for w in weights)
    return validate_density(mat, dims)


def random_ginibre(dims: BipartiteDims | tuple[int, int], rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    if not isinstance(dims, BipartiteDims):
        dims = BipartiteDims(*dims)
    d = dims.total
    g = rng.normal(size=(d, rank or d)) + 1j * rng.normal(size=(d, rank or d))
    mat = g @ g.conj().T
    mat = (mat + mat.conj().T) / 2
    return validate_density(mat / np.trace(mat).real, dims)


def _int(params: Mapping, key: str, default=None) -> int:
    if key not in params:
        if default is None:
            raise BadParams(f"missing parameter {key!r}")
        return default
    try:
        return int(params[key])
    except (TypeError, ValueError) as err:
        raise BadParams(f"parameter {key!r} must be an integer") from err


def _float(params: Mapping, key: str, default=None) -> float:
    if key not in params:
        if default is None:
            raise BadParams(f"missing parameter {key!r}")
        return default
    try:
        return float(params[key])
    except (TypeError, ValueError) as err:
        raise BadParams(f"parameter {key!r} must be a number") from err


def _bell(params):
    m = _int(params, "M", 2)
    if m < 2:
        raise BadParams("M must be >= 2")
    psi = phi_plus(m)
    return validate_density(np.outer(psi, psi.conj()), (m, m))


def _figure1(params):
    p = _float(params, "p")
    if not 0.0 <= p <= 1.0:
        raise BadParams(f"p must lie in [0, 1], got {p}")
    dims = BipartiteDims(2, 3)
    psi = phi_plus(2, 3)
    k01 = ket(dims, 0, 1)
    return validate_density(p * np.outer(psi, psi.conj()) + (1 - p) * np.outer(k01, k01), dims)


def _isotropic(params):
    m = _int(params, "M", 2)
    f = _float(params, "F")
    if m < 2:
        raise BadParams("M must be >= 2")
    if not 0.0 <= f <= 1.0:
        raise BadParams(f"F must lie in [0, 1], got {f}")
    psi = phi_plus(m)
    proj = np.outer(psi, psi.conj())
    mat = f * proj + (1 - f) * (np.eye(m * m) - proj) / (m * m - 1)
    return validate_density(mat, (m, m))


def _product(params):
    try:
        ra = np.asarray(params["rhoA"], dtype=np.complex128)
        rb = np.asarray(params["rhoB"], dtype=np.complex128)
    except KeyError as err:
        raise BadParams(f"missing parameter {err.args[0]!r}") from err
    if ra.ndim != 2 or rb.ndim != 2:
        raise BadParams("rhoA and rhoB must be square matrices")
    return validate_density(np.kron(ra, rb), (ra.shape[0], rb.shape[0]))


def _ginibre(params):
    dims = BipartiteDims(_int(params, "M", 2), _int(params, "N", 2))
    rng = np.random.default_rng(_int(params, "seed", 0))
    rank = _int(params, "rank", dims.total)
    return random_ginibre(dims, rng, rank)


def _separable(params):
    dims = BipartiteDims(_int(params, "M", 2), _int(params, "N", 2))
    rng = np.random.default_rng(_int(params, "seed", 0))
    return random_separable(dims, _int(params, "terms", 4), rng)


FAMILIES = {
    "bell": _bell,
    "tiles_upb": lambda params: validate_density(_tiles(), (3, 3)),
    "figure1": _figure1,
    "isotropic": _isotropic,
    "product": _product,
    "random_ginibre": _ginibre,
    "random_separable": _separable,
}

# families with a natural maximally entangled reference vector
REFERENCE_PURE = {"bell", "figure1", "isotropic"}


def make_family(name: str, params: Mapping | None = None) -> DensityMatrix:
    try:
        build = FAMILIES[name]
    except KeyError:
        raise UnknownFamily(name) from None
    return build(dict(params or {}))


def reference_schmidt(name: str, params: Mapping | None = None) -> SchmidtDecomposition:
    """Schmidt form of the maximally entangled vector a family is built on."""
    if name not in REFERENCE_PURE:
        raise BadParams(f"family {name!r} has no reference pure state")
    rho = make_family(name, params)
    return canonical_schmidt(rho.m, rho.n)


def is_pure(rho: DensityMatrix, tol: float = 1e-9) -> bool:
    return abs(float(np.real(np.trace(rho.mat @ rho.mat))) - 1.0) <= tol


def dominant_vector(rho: DensityMatrix) -> PureState:
    """Eigenvector of the largest eigenvalue, as a PureState."""
    w, v = np.linalg.eigh(rho.mat)
    return PureState(_frozen(v[:, -1] / np.linalg.norm(v[:, -1])), rho.dims)


__all__ = [
    "BipartiteDims", "DensityMatrix", "PureState", "SchmidtDecomposition", "Violation", "Check",
    "InvalidState", "NotHermitian", "TraceNotOne", "NotPSD", "DimensionMismatch",
    "UnknownFamily", "BadParams", "WeightSumError",
    "check_density", "validate_density", "pure_state", "partial_trace_a", "partial_trace_b",
    "schmidt", "pure_concurrence", "max_concurrence", "mix", "make_family", "reference_schmidt",
    "canonical_schmidt", "phi_plus", "random_pure", "random_product_pure", "random_separable",
    "random_ginibre", "dominant_vector", "is_pure", "swap_subsystems", "FAMILIES",
]
