"""Random-restart hill climbing over LOO pairs.

Rotating the A set by ``O_A`` and the B set by ``O_B`` changes the LUR sum
only through ``Tr(O_A D O_B^T)``, where ``D = C - a b^T`` holds the seed
pair's cross correlations minus the product of local expectations. The
climber therefore works on this small real objective and only materialises
the winning LOO pair at the end.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from ._accel import max_workers
from .bounds import closest_pure_pair, lurs_bound, lurs_bound_from_value
from .criteria import correlations, local_expectations
from .loo import LOOPair, isotropic_pair, random_orthogonal, rotate_pair, standard_pair
from .qstate import DensityMatrix, partial_trace_a, partial_trace_b


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 32
    steps_per_restart: int = 500
    initial_step: float = 0.3
    decay: float = 0.95
    seed: int = 42
    patience: int = 10

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.steps_per_restart < 1:
            raise ValueError("steps_per_restart must be >= 1")
        if not 0.0 < self.decay < 1.0:
            raise ValueError("decay must lie in (0, 1)")
        if self.initial_step <= 0.0:
            raise ValueError("initial_step must be positive")


@dataclass
class RestartResult:
    index: int
    seed_name: str
    start_bound: float
    bound: float
    accepted: int


@dataclass
class OptimizationResult:
    pair: LOOPair
    bound: float
    seed_bounds: dict[str, float]
    restarts: list[RestartResult] = field(default_factory=list)
    config: OptimizerConfig = field(default_factory=OptimizerConfig)

    @property
    def best_restart(self) -> RestartResult | None:
        return max(self.restarts, key=lambda r: r.bound) if self.restarts else None


def seed_pairs(rho: DensityMatrix) -> list[LOOPair]:
    seeds = [closest_pure_pair(rho)]
    if rho.m == rho.n:
        seeds.append(isotropic_pair(rho.m, rho.n))
    seeds.append(standard_pair(rho.dims, (1.0, 1.0, 1.0)))
    seeds.append(standard_pair(rho.dims, (-1.0, -1.0, 1.0)))
    return seeds


@dataclass(frozen=True, eq=False)
class _Landscape:
    """Constant part and ``D`` of the LUR sum for one seed pair."""

    pair: LOOPair
    d: np.ndarray
    offset: float

    def value(self, objective: float) -> float:
        return self.offset + 2.0 * objective


def _landscape(rho: DensityMatrix, pair: LOOPair) -> _Landscape:
    ops_a = pair.a[pair.active]
    ea = local_expectations(partial_trace_b(rho), ops_a)
    eb = local_expectations(partial_trace_a(rho), pair.b)
    c = correlations(rho, ops_a, pair.b)
    # sum_i <A_i>^2 = Tr rho_A^2 is rotation invariant; keep it in the offset
    offset = rho.m + rho.n - float(ea @ ea) - float(eb @ eb)
    return _Landscape(pair, c - np.outer(ea, eb), offset)


def _kicks(rng: np.random.Generator, steps: int, dim: int) -> np.ndarray:
    g = rng.normal(size=(steps, dim, dim))
    k = g - g.transpose(0, 2, 1)
    norms = np.sqrt(np.sum(k * k, axis=(1, 2)))[:, None, None]
    # Frobenius norm sqrt(2), i.e. a one-radian plane rotation at step 1
    return k * (math.sqrt(2.0) / np.where(norms == 0, 1.0, norms))


def _run_restart(rho: DensityMatrix, scapes: list[_Landscape], index: int, cfg: OptimizerConfig):
    scape = scapes[index % len(scapes)]
    rng = np.random.default_rng([cfg.seed, index])
    da, db = scape.d.shape
    if index < len(scapes):
        oa, ob = np.eye(da), np.eye(db)
    else:
        oa, ob = random_orthogonal(da, rng), random_orthogonal(db, rng)
    start = float(np.trace(oa @ scape.d @ ob.T))
    ka = _kicks(rng, cfg.steps_per_restart, da)
    kb = _kicks(rng, cfg.steps_per_restart, db)
    oa, ob, obj, accepted = kernels.hill_climb(scape.d, oa, ob, ka, kb, cfg.initial_step, cfg.decay, cfg.patience)
    m, n = rho.m, rho.n
    return (
        RestartResult(
            index,
            scape.pair.name,
            lurs_bound_from_value(scape.value(start), m, n),
            lurs_bound_from_value(scape.value(obj), m, n),
            accepted,
        ),
        oa,
        ob,
    )


def _reorthonormalise(o: np.ndarray) -> np.ndarray:
    # strip drift accumulated over many products
    u, _, vt = np.linalg.svd(o)
    return u @ vt


def optimize_loos(rho: DensityMatrix, cfg: OptimizerConfig | None = None) -> OptimizationResult:
    """Search LOO pairs for the largest LUR concurrence bound.

    Restart ``r`` climbs from seed pair ``r mod S``; the first S restarts
    start at the seed itself, later ones at a random orthogonal rotation of
    it. Each restart draws from its own stream ``(cfg.seed, r)`` so results do
    not depend on scheduling. The returned bound is never below the best seed.
    """
    cfg = cfg or OptimizerConfig()
    seeds = seed_pairs(rho)
    seed_bounds = {p.name: lurs_bound(rho, p) for p in seeds}
    scapes = [_landscape(rho, p) for p in seeds]

    workers = min(max_workers(), cfg.restarts)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            runs = list(pool.map(lambda i: _run_restart(rho, scapes, i, cfg), range(cfg.restarts)))
    else:
        runs = [_run_restart(rho, scapes, i, cfg) for i in range(cfg.restarts)]

    best_seed = max(seeds, key=lambda p: seed_bounds[p.name])
    best_pair, best_val = best_seed, seed_bounds[best_seed.name]
    for res, oa, ob in runs:
        if res.bound > best_val:
            scape = scapes[res.index % len(scapes)]
            cand = rotate_pair(scape.pair, _reorthonormalise(oa), _reorthonormalise(ob), name=f"optimized[{res.index}]")
            val = lurs_bound(rho, cand)
            if val > best_val:
                best_pair, best_val = cand, val
    return OptimizationResult(best_pair, best_val, seed_bounds, [r for r, _, _ in runs], cfg)
