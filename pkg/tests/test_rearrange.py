import math

import numpy as np
import pytest

from conftest import DIMS
from entbound.qstate import make_family, random_ginibre, random_product_pure, random_separable
from entbound.rearrange import (
    ccnr_detects,
    ccnr_value,
    partial_transpose,
    ppt_detects,
    ppt_value,
    realign,
    trace_norm,
)
from entbound.qstate import random_pure, schmidt
from oracles import partial_transpose_blocks, realign_blocks, trace_norm_gram

# ||R(tiles)||, frozen from the block-vectorisation oracle below
TILES_CCNR = 1.0874124648


def test_partial_transpose_matches_block_oracle(rng):
    for m, n in DIMS + [(3, 4)]:
        rho = random_ginibre((m, n), rng)
        np.testing.assert_allclose(partial_transpose(rho).mat, partial_transpose_blocks(rho.mat, m, n), atol=0)


def test_partial_transpose_entry_rule():
    # 4x4 integer pattern: (T_A rho)[(i,k),(j,l)] = rho[(j,k),(i,l)]
    from entbound import kernels

    mat = np.arange(16).reshape(4, 4).astype(complex)
    expected = np.array([[0, 1, 8, 9], [4, 5, 12, 13], [2, 3, 10, 11], [6, 7, 14, 15]])
    np.testing.assert_array_equal(kernels.partial_transpose(mat, 2, 2).real, expected)


def test_realign_matches_block_oracle(rng):
    for m, n in DIMS + [(3, 4)]:
        rho = random_ginibre((m, n), rng)
        r = realign(rho).mat
        assert r.shape == (m * m, n * n)
        np.testing.assert_allclose(r, realign_blocks(rho.mat, m, n), atol=0)


def test_bell_values():
    bell = make_family("bell", {"M": 2})
    pt = partial_transpose(bell).mat
    np.testing.assert_allclose(np.sort(np.linalg.eigvalsh(pt)), [-0.5, 0.5, 0.5, 0.5], atol=1e-15)
    assert ppt_value(bell) == pytest.approx(2.0, abs=1e-12)
    np.testing.assert_allclose(np.linalg.svd(realign(bell).mat, compute_uv=False), [0.5] * 4, atol=1e-15)
    assert ccnr_value(bell) == pytest.approx(2.0, abs=1e-12)


def test_product_states_norm_one(rng):
    for dims in DIMS:
        rho = random_product_pure(dims, rng).density()
        assert ppt_value(rho) == pytest.approx(1.0, abs=1e-12)
        assert ccnr_value(rho) == pytest.approx(1.0, abs=1e-12)


def test_figure1_pure_end():
    rho = make_family("figure1", {"p": 1})
    assert ppt_value(rho) == pytest.approx(2.0, abs=1e-12)
    assert ccnr_value(rho) == pytest.approx(2.0, abs=1e-12)


def test_tiles(tiles):
    assert ppt_value(tiles) == pytest.approx(1.0, abs=1e-9)
    assert not ppt_detects(tiles)
    assert ccnr_detects(tiles)
    oracle = trace_norm_gram(realign_blocks(tiles.mat, 3, 3))
    assert ccnr_value(tiles) == pytest.approx(oracle, abs=1e-10)
    assert ccnr_value(tiles) == pytest.approx(TILES_CCNR, abs=1e-9)
    # consistent with a CCNR concurrence bound of 0.050 +- 0.001 at M = 3
    assert abs((TILES_CCNR - 1) * math.sqrt(2 / 6) - 0.050) <= 0.001


def test_trace_norm():
    assert trace_norm(np.eye(5)) == pytest.approx(5.0)
    assert trace_norm(np.diag([1.0, -1.0])) == pytest.approx(2.0)
    assert trace_norm(np.diag([1.0, -1.0]), hermitian=True) == pytest.approx(2.0)


def test_trace_norm_against_gram_oracle(rng):
    for shape in [(4, 9), (9, 4), (64, 81), (3, 3)]:
        a = rng.normal(size=shape) + 1j * rng.normal(size=shape)
        ref = trace_norm_gram(a)
        assert abs(trace_norm(a) - ref) <= 1e-10 * ref


def test_trace_norm_hermitian_route_agrees(rng):
    for d in (4, 6, 9):
        a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        h = a + a.conj().T
        assert abs(trace_norm(h) - trace_norm(h, hermitian=True)) < 1e-10


@pytest.mark.parametrize("dims", DIMS)
def test_involution_and_frobenius(dims, rng):
    for _ in range(100):
        rho = random_ginibre(dims, rng)
        twice = partial_transpose(type(rho)(partial_transpose(rho).mat, rho.dims)).mat
        assert np.max(np.abs(twice - rho.mat)) == 0.0
        assert np.trace(partial_transpose(rho).mat).real == pytest.approx(1.0, abs=1e-12)
        assert abs(np.linalg.norm(realign(rho).mat) - np.linalg.norm(rho.mat)) <= 1e-12


@pytest.mark.parametrize("dims", DIMS + [(3, 4)])
def test_pure_state_norms_from_schmidt(dims, rng):
    for _ in range(50):
        psi = random_pure(dims, rng)
        expected = np.sum(np.sqrt(schmidt(psi).coefficients)) ** 2
        rho = psi.density()
        assert abs(ppt_value(rho) - expected) < 1e-9
        assert abs(ccnr_value(rho) - expected) < 1e-9


@pytest.mark.parametrize("dims", DIMS)
def test_separable_not_detected(dims, rng):
    for _ in range(100):
        rho = random_separable(dims, int(rng.integers(1, 5)), rng)
        assert ppt_value(rho) <= 1 + 1e-9
        assert ccnr_value(rho) <= 1 + 1e-9
