import math

import numpy as np
import pytest

from conftest import DIMS
from entbound.criteria import (
    BlochError,
    bloch,
    cm_value,
    correlations,
    k_mn,
    lurs_sum,
    lurs_sum_direct,
    lurs_value,
    variance,
)
from entbound.loo import lemma1_pair, random_orthogonal, rotate, rotate_pair, standard_loos, standard_pair
from entbound.qstate import (
    DensityMatrix,
    DimensionMismatch,
    canonical_schmidt,
    make_family,
    partial_trace_a,
    partial_trace_b,
    random_ginibre,
    random_pure,
    random_separable,
    validate_density,
)
from oracles import lur_sum_spectral, spectral_variance
from test_loo import haar_unitary


def random_pair(dims, rng):
    return rotate_pair(standard_pair(dims), random_orthogonal(dims.m**2, rng), random_orthogonal(dims.n**2, rng))


def test_variance_textbook():
    plus = np.array([1, 0, 1, 0]) / math.sqrt(2)  # |+>|0>
    rho = validate_density(np.outer(plus, plus), (2, 2))
    sz = np.kron(np.diag([1.0, -1.0]), np.eye(2))
    assert variance(rho, sz) == pytest.approx(1.0, abs=1e-14)
    proj = np.outer(plus, plus)
    assert variance(rho, proj) == pytest.approx(0.0, abs=1e-14)
    with pytest.raises(DimensionMismatch):
        variance(rho, np.eye(3))


def test_variance_against_spectral_oracle(rng):
    for dims in DIMS:
        d = dims[0] * dims[1]
        for _ in range(20):
            rho = random_ginibre(dims, rng)
            h = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
            h = h + h.conj().T
            assert abs(variance(rho, h) - spectral_variance(rho.mat, h)) < 1e-10


@pytest.mark.parametrize("dims", DIMS)
def test_lurs_closed_form_matches_direct(dims, rng):
    for _ in range(30):
        rho = random_ginibre(dims, rng, rank=int(rng.integers(1, 4)))
        pair = random_pair(rho.dims, rng)
        closed = lurs_sum(rho, pair)
        assert abs(closed - lurs_sum_direct(rho, pair)) < 1e-9
        assert abs(closed - lur_sum_spectral(rho.mat, pair.a, pair.b, *dims)) < 1e-9


def test_lurs_bell_equality_pair():
    bell = make_family("bell", {"M": 2})
    pair = lemma1_pair(canonical_schmidt(2, 2), bell.dims)
    res = lurs_value(bell, pair)
    assert res.value == pytest.approx(0.0, abs=1e-12)
    assert res.threshold == 2.0 and res.detected


@pytest.mark.parametrize("dims", DIMS)
def test_lurs_separable_never_detected(dims, rng):
    for _ in range(50):
        rho = random_separable(dims, int(rng.integers(1, 5)), rng)
        res = lurs_value(rho, random_pair(rho.dims, rng))
        assert res.value >= res.threshold - 1e-9
        assert not res.detected


@pytest.mark.parametrize("dims", DIMS)
def test_single_system_uncertainty_identity(dims, rng):
    for _ in range(30):
        rho = random_ginibre(dims, rng, rank=int(rng.integers(1, 4)))
        for red, d in ((partial_trace_b(rho), dims[0]), (partial_trace_a(rho), dims[1])):
            loos = rotate(standard_loos(d, haar_unitary(d, rng)), random_orthogonal(d * d, rng))
            total = 0.0
            for g in loos:
                mean = np.trace(red @ g).real
                total += np.trace(red @ g @ g).real - mean**2
            purity = np.trace(red @ red).real
            assert abs(total - (d - purity)) < 1e-9
            assert total >= d - 1 - 1e-9


def test_shared_rotation_keeps_cross_term(rng):
    dims = (3, 3)
    rho = random_ginibre(dims, rng)
    pair = random_pair(rho.dims, rng)
    before = np.trace(correlations(rho, pair.a, pair.b))
    o = random_orthogonal(9, rng)
    rot = rotate_pair(pair, o, o)
    after = np.trace(correlations(rho, rot.a, rot.b))
    assert abs(before - after) < 1e-10


def test_variance_concave_over_mixtures(rng):
    for dims in DIMS:
        d = dims[0] * dims[1]
        psis = [random_pure(dims, rng) for _ in range(4)]
        p = rng.dirichlet(np.ones(4))
        rho = validate_density(sum(w * s.density().mat for w, s in zip(p, psis)), dims)
        for _ in range(10):
            h = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
            h = h + h.conj().T
            mixed = variance(rho, h)
            avg = sum(w * variance(s.density(), h) for w, s in zip(p, psis))
            assert mixed >= avg - 1e-10


def test_k_values():
    assert k_mn(2, 2) == pytest.approx(1.0)
    assert k_mn(3, 3) == pytest.approx(3.0)
    assert k_mn(2, 3) == pytest.approx(math.sqrt(3))


def test_bloch_maximally_mixed():
    b = bloch(validate_density(np.eye(6) / 6, (2, 3)))
    assert np.allclose(b.r, 0) and np.allclose(b.s, 0) and np.allclose(b.t, 0)


def test_bloch_bell():
    # order (w, u, v) = (sigma_z, sigma_x, sigma_y): <zz> = 1, <xx> = 1, <yy> = -1
    b = bloch(make_family("bell", {"M": 2}))
    np.testing.assert_allclose(b.t, np.diag([1.0, 1.0, -1.0]), atol=1e-15)
    res = cm_value(make_family("bell", {"M": 2}))
    assert res.value == pytest.approx(3.0) and res.threshold == pytest.approx(1.0) and res.detected


@pytest.mark.parametrize("dims", DIMS + [(3, 4)])
def test_bloch_reconstruction(dims, rng):
    for _ in range(20):
        rho = random_ginibre(dims, rng, rank=int(rng.integers(1, 5)))
        b = bloch(rho)
        assert b.r.shape == (dims[0] ** 2 - 1,) and b.t.shape == (dims[0] ** 2 - 1, dims[1] ** 2 - 1)
        assert np.max(np.abs(b.reconstruct() - rho.mat)) <= 1e-10


def test_bloch_product_through_reconstruction(rng):
    ra = random_ginibre((2, 2), rng).mat[:2, :2]
    ra = ra / np.trace(ra)
    rb = np.diag([0.5, 0.3, 0.2])
    rho = validate_density(np.kron(ra, rb), (2, 3))
    assert np.max(np.abs(bloch(rho).reconstruct() - rho.mat)) <= 1e-10


def test_bloch_rejects_non_hermitian():
    bad = DensityMatrix(np.array([[0.5, 0.1j, 0, 0], [0.1j, 0.5, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]), make_family("bell", {"M": 2}).dims)
    with pytest.raises(BlochError):
        bloch(bad)


@pytest.mark.parametrize("dims", DIMS)
def test_cm_local_unitary_invariance(dims, rng):
    rho = random_ginibre(dims, rng, rank=2)
    base = cm_value(rho).value
    for _ in range(10):
        u = np.kron(haar_unitary(dims[0], rng), haar_unitary(dims[1], rng))
        rotated = validate_density(u @ rho.mat @ u.conj().T, dims)
        assert abs(cm_value(rotated).value - base) < 1e-8


@pytest.mark.parametrize("dims", DIMS)
def test_cm_separable(dims, rng):
    for _ in range(100):
        rho = random_separable(dims, int(rng.integers(1, 5)), rng)
        res = cm_value(rho)
        assert res.value <= res.threshold + 1e-9 and not res.detected
