import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import DIMS
from entbound.bounds import (
    best_bound,
    caf_bound,
    clamp,
    closest_pure_pair,
    cm_bound,
    lurs_bound,
    schmidt_inequality_check,
    upper_estimate,
)
from entbound.loo import isotropic_pair, lemma1_pair
from entbound.qstate import (
    canonical_schmidt,
    make_family,
    max_concurrence,
    pure_concurrence,
    random_ginibre,
    random_pure,
    random_separable,
    schmidt,
)
from oracles import optimal_lurs_bound


def test_caf_tiles(tiles):
    assert abs(caf_bound(tiles) - 0.050) <= 0.001


@pytest.mark.parametrize("m", [2, 3, 4])
def test_bell_all_tight(m):
    bell = make_family("bell", {"M": m})
    c = max_concurrence(m)
    pair = lemma1_pair(canonical_schmidt(m, m), bell.dims)
    for value in (caf_bound(bell), cm_bound(bell), lurs_bound(bell, pair), lurs_bound(bell, isotropic_pair(m, m))):
        assert value == pytest.approx(c, abs=1e-8)


def test_bell_cm_arithmetic():
    # sqrt(8/32) * (3 - 1) = 1
    assert cm_bound(make_family("bell", {"M": 2})) == pytest.approx(1.0, abs=1e-12)


def test_maximally_mixed_cm_negative():
    rho = make_family("isotropic", {"M": 3, "F": 1 / 9})
    assert cm_bound(rho) < 0
    assert best_bound(rho).cm == 0.0


def test_cm_isotropic_monotone():
    # ||T|| is |affine| in F with its zero at the maximally mixed point F = 1/M^2
    vals = [cm_bound(make_family("isotropic", {"M": 3, "F": f})) for f in np.linspace(1 / 9, 1, 21)]
    assert np.all(np.diff(vals) > 0)


def test_figure1_pure_end_lurs():
    rho = make_family("figure1", {"p": 1.0})
    pair = lemma1_pair(canonical_schmidt(2, 3), rho.dims)
    assert lurs_bound(rho, pair) == pytest.approx(1.0, abs=1e-12)


def test_clamp():
    assert clamp(-0.3, 2) == 0.0
    assert clamp(-0.0, 2) == 0.0 and math.copysign(1, clamp(-0.0, 2)) == 1
    assert clamp(5.0, 3) == pytest.approx(math.sqrt(4 / 3))


def test_report_fields(tiles):
    rep = best_bound(tiles, "standard")
    assert rep.best == max(rep.caf, rep.lurs, rep.cm)
    assert rep.caf == clamp(rep.caf_raw, 3)
    assert rep.lurs_raw < 0 and rep.lurs == 0.0
    assert rep.lurs_threshold == 4.0 and rep.cm_threshold == pytest.approx(3.0)


def test_best_bound_separable_product():
    rep = best_bound(make_family("figure1", {"p": 0.0}))
    assert rep.best == 0.0


def test_best_bound_pure_state_lemma1(rng):
    for dims in DIMS:
        psi = random_pure(dims, rng)
        rep = best_bound(psi.density())
        mu = schmidt(psi).coefficients
        s = np.sqrt(mu)
        expected = 4 * sum(s[j] * s[k] for j in range(len(s)) for k in range(j + 1, len(s))) / math.sqrt(2 * dims[0] * (dims[0] - 1))
        assert rep.lurs_raw == pytest.approx(expected, abs=1e-8)


def test_swapped_state_noted(rng):
    rep = best_bound(random_ginibre((3, 2), rng))
    assert "swap" in rep.notes and rep.m == 2


def test_random_pure_2x3_lurs_dominates_caf(rng):
    for _ in range(200):
        rho = random_pure((2, 3), rng).density()
        assert lurs_bound(rho, closest_pure_pair(rho)) >= caf_bound(rho) - 1e-8


@pytest.mark.parametrize("dims", DIMS)
def test_pure_state_consistency(dims, rng):
    for _ in range(300):
        psi = random_pure(dims, rng)
        rho = psi.density()
        c = pure_concurrence(psi)
        lb = lurs_bound(rho, lemma1_pair(schmidt(psi), rho.dims))
        assert lb <= c + 1e-8
        if dims[0] == 2:
            assert abs(lb - c) <= 1e-8
        assert cm_bound(rho) <= c + 1e-8


def test_schmidt_inequality_examples():
    assert schmidt_inequality_check([1, 0, 0])
    for m in (2, 3, 6):
        mu = np.full(m, 1 / m)
        lhs = m * (m - 1) / 2 / m**2
        assert lhs == pytest.approx((m - 1) / (2 * m))
        assert schmidt_inequality_check(mu)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(0, 1), min_size=2, max_size=6).filter(lambda v: sum(v) > 1e-6))
def test_schmidt_inequality_hypothesis(v):
    mu = np.array(v) / sum(v)
    assert schmidt_inequality_check(mu)


def test_upper_estimate_pure_exact(rng):
    for dims in DIMS:
        psi = random_pure(dims, rng)
        assert upper_estimate(psi.density(), trials=50, seed=1) == pytest.approx(pure_concurrence(psi), abs=1e-12)


def test_upper_estimate_monotone(rng):
    rho = random_ginibre((3, 3), rng, rank=3)
    best, running = upper_estimate(rho, trials=100, seed=5, trace=True)
    assert np.all(np.diff(running) <= 0)
    # fixed seed prefix: fewer trials give the running prefix
    short, run_short = upper_estimate(rho, trials=40, seed=5, trace=True)
    assert short >= best
    assert run_short[-1] >= running[-1]


def test_upper_estimate_separable_decreases(rng):
    rho = random_separable((2, 2), 2, rng)
    few = upper_estimate(rho, trials=5, seed=0)
    many = upper_estimate(rho, trials=2000, seed=0)
    assert many <= few
    assert many >= 0.0


def test_upper_estimate_tiles(tiles):
    assert upper_estimate(tiles, trials=200, seed=0) >= 0.050


@pytest.mark.parametrize("dims", DIMS)
def test_sandwich_small(dims, rng):
    for _ in range(30):
        rho = random_ginibre(dims, rng, rank=int(rng.integers(1, 3)))
        rep = best_bound(rho)
        ub = upper_estimate(rho, trials=200, seed=0)
        assert max(rep.caf, rep.lurs, rep.cm) <= ub + 1e-8


def test_optimal_oracle_dominates_fixed_pairs(tiles, rng):
    best = optimal_lurs_bound(tiles.mat, 3, 3)
    for strategy in ("standard", "lemma1", "isotropic"):
        assert best_bound(tiles, strategy).lurs_raw <= best + 1e-9
