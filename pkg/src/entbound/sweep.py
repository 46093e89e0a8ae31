"""Parameter sweeps over a state family."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._accel import max_workers
from .bounds import best_bound
from .loo import LOOPair, lemma1_pair
from .qstate import BadParams, make_family, reference_schmidt


class UnknownParam(KeyError):
    pass


class BadRange(ValueError):
    pass


# parameters each family accepts, used to reject typos early
FAMILY_PARAMS = {
    "bell": {"M"},
    "tiles_upb": set(),
    "figure1": {"p"},
    "isotropic": {"M", "F"},
    "random_ginibre": {"M", "N", "seed", "rank"},
    "random_separable": {"M", "N", "seed", "terms"},
    "product": {"rhoA", "rhoB"},
}


@dataclass(frozen=True)
class SweepRow:
    param: float
    ccnr_bound: float
    ppt_bound: float
    lurs_bound: float
    cm_bound: float

    @property
    def best(self) -> float:
        return max(self.ccnr_bound, self.ppt_bound, self.lurs_bound, self.cm_bound)


def grid(start: float, stop: float, steps: int) -> np.ndarray:
    if steps < 2:
        raise BadRange("a sweep needs at least 2 points")
    if not np.isfinite(start) or not np.isfinite(stop) or start > stop:
        raise BadRange(f"bad range [{start}, {stop}]")
    return np.linspace(start, stop, steps)


def _loo_for(family: str, params: dict, loo):
    if loo == "lemma1-psi":
        sd = reference_schmidt(family, params)
        rho = make_family(family, params)
        return lemma1_pair(sd, rho.dims)
    return loo


def sweep(family: str, param: str, start: float, stop: float, steps: int, loo="lemma1", fixed=None, config=None) -> list[SweepRow]:
    """Clamped bounds on a uniform grid (endpoints included).

    ``loo`` accepts the strategies of :func:`entbound.bounds.best_bound`
    plus ``"lemma1-psi"``: the equality pair of the family's maximally
    entangled reference vector, held fixed along the sweep.
    """
    if family in FAMILY_PARAMS and param not in FAMILY_PARAMS[family]:
        raise UnknownParam(f"family {family!r} has no parameter {param!r}")
    fixed = dict(fixed or {})
    values = grid(start, stop, steps)

    def row(x: float) -> SweepRow:
        params = {**fixed, param: float(x)}
        rho = make_family(family, params)
        strategy = _loo_for(family, params, loo) if not isinstance(loo, LOOPair) else loo
        rep = best_bound(rho, strategy, config)
        return SweepRow(float(x), rep.ccnr_bound, rep.ppt_bound, rep.lurs, rep.cm)

    workers = min(max_workers(), len(values))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(row, values))
    return [row(x) for x in values]


__all__ = ["SweepRow", "sweep", "grid", "UnknownParam", "BadRange", "BadParams"]
