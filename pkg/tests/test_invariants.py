import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaussian_cnp.core import make_state, tensor
from gaussian_cnp.errors import (
    IndexOutOfRange,
    NotPositiveDefinite,
    UnsupportedModeCount,
)
from gaussian_cnp.invariants import (
    InvariantSet,
    coupling_determinants,
    g_eval,
    invariants_from_nu,
    minor_invariants,
    partial_transpose,
    symplectic_eigenvalues,
)

from conftest import nu_oracle, random_mixed_matrix, random_symplectic

TMSV = make_state("tmsv", {"r": 0.5}, 2).matrix


def esym_bruteforce(values, degree):
    return sum(math.prod(c) for c in itertools.combinations(values, degree))


def test_partial_transpose_diagonal_state_unchanged():
    m = tensor(make_state("thermal", {"n_th": 0.3}), make_state("thermal", {"n_th": 1.2})).matrix
    assert np.array_equal(partial_transpose(m, 0), m)


def test_partial_transpose_involution(rng):
    m = random_mixed_matrix(3, rng)
    for mode in range(3):
        assert np.array_equal(partial_transpose(partial_transpose(m, mode), mode), m)
    with pytest.raises(IndexOutOfRange):
        partial_transpose(m, 3)


def test_partial_transpose_tmsv_spectrum():
    nus = symplectic_eigenvalues(partial_transpose(TMSV, 0))
    expected = [math.exp(-1) / 2, math.exp(1) / 2]
    assert np.allclose(nus, expected, rtol=1e-12)
    assert np.allclose(nu_oracle(partial_transpose(TMSV, 0)), expected, rtol=1e-12)
    assert np.allclose(nus, [0.1839397, 1.3591409], atol=1e-7)


def test_symplectic_eigenvalue_examples():
    assert np.allclose(symplectic_eigenvalues(0.5 * np.eye(6)), [0.5] * 3, atol=1e-15)
    assert np.allclose(symplectic_eigenvalues(1.5 * np.eye(2)), [1.5], atol=1e-15)
    for r in (0.1, 0.7, 1.4):
        tmsv = make_state("tmsv", {"r": r}, 2).matrix
        assert np.allclose(symplectic_eigenvalues(tmsv), [0.5, 0.5], rtol=1e-12)
    with pytest.raises(NotPositiveDefinite):
        symplectic_eigenvalues(np.diag([1.0, -1.0]))


@settings(max_examples=80, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 3))
def test_symplectic_eigenvalues_match_hermitian_oracle(seed, n):
    m = random_mixed_matrix(n, np.random.default_rng(seed))
    assert np.allclose(symplectic_eigenvalues(m), nu_oracle(m), rtol=1e-9)


def test_minor_invariants_examples():
    inv = minor_invariants(0.5 * np.eye(4))
    assert inv.values == pytest.approx((1 / 16, 1 / 2), abs=1e-15)
    inv = minor_invariants(TMSV)
    assert inv.values == pytest.approx((1 / 16, 1 / 2), abs=1e-13)
    inv = minor_invariants(0.5 * np.eye(6))
    assert inv.values == pytest.approx((1 / 64, 3 / 16, 3 / 4), abs=1e-15)
    assert inv[3] == 1.0


def test_minor_invariants_match_explicit_block_expansion(rng):
    m = random_mixed_matrix(2, rng)
    det = np.linalg.det
    gA, gB, x = m[:2, :2], m[2:, 2:], m[2:, :2]
    inv = minor_invariants(m)
    assert inv[1] == pytest.approx(det(gA) + det(gB) + 2 * det(x), rel=1e-12)
    assert inv[0] == pytest.approx(det(m), rel=1e-12)

    m = random_mixed_matrix(3, rng)
    blocks = lambda rows, cols: m[np.ix_(sum(([2 * r, 2 * r + 1] for r in rows), []), sum(([2 * c, 2 * c + 1] for c in cols), []))]
    d = coupling_determinants(m)
    i2 = det(blocks([0], [0])) + det(blocks([1], [1])) + det(blocks([2], [2])) + 2 * (d["x"] + d["y"] + d["z"])
    i1 = (
        det(blocks([0, 1], [0, 1])) + det(blocks([1, 2], [1, 2])) + det(blocks([0, 2], [0, 2]))
        + 2 * (d["Dx"] + d["Dy"] + d["Dz"])
    )
    inv = minor_invariants(m)
    assert inv[2] == pytest.approx(i2, rel=1e-12)
    assert inv[1] == pytest.approx(i1, rel=1e-12)


def test_minor_invariants_rejects_four_modes():
    with pytest.raises(UnsupportedModeCount):
        minor_invariants(0.5 * np.eye(8))


def test_invariants_from_nu_examples():
    assert invariants_from_nu([0.5, 0.5]).values == pytest.approx((0.0625, 0.5), abs=1e-16)
    assert invariants_from_nu([0.5] * 3).values == pytest.approx((0.015625, 0.1875, 0.75), abs=1e-16)
    inv = invariants_from_nu([math.exp(-1) / 2, math.exp(1) / 2])
    assert inv[1] == pytest.approx(math.exp(-2) / 4 + math.exp(2) / 4, rel=1e-14)
    assert inv[1] == pytest.approx(1.8810978, abs=1e-7)
    assert inv[0] == pytest.approx(0.0625, rel=1e-14)


@settings(max_examples=50, deadline=None)
@given(nus=st.lists(st.floats(0.5, 5.0), min_size=1, max_size=5))
def test_invariants_from_nu_is_elementary_symmetric(nus):
    n = len(nus)
    sq = [v * v for v in nus]
    inv = invariants_from_nu(nus)
    for k in range(n):
        assert inv[k] == pytest.approx(esym_bruteforce(sq, n - k), rel=1e-12)


def test_g_eval_examples():
    vac = minor_invariants(0.5 * np.eye(4), transposed=True)
    assert g_eval(vac, 0.25) == pytest.approx(0.0, abs=1e-16)
    pt = minor_invariants(partial_transpose(TMSV, 0), transposed=True)
    assert g_eval(pt, 0.25) == pytest.approx((math.cosh(2.0) - 1) / 4, abs=1e-12)
    assert g_eval(pt, 0.25) == pytest.approx(0.6905489, abs=1e-7)
    inv = InvariantSet(3, (0.2, 1.3, 2.1), True)
    assert g_eval(inv, 0.0) == -2 * 0.2


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 3), x=st.floats(-2, 2))
def test_g_eval_vieta_and_roots(seed, n, x):
    m = partial_transpose(random_mixed_matrix(n, np.random.default_rng(seed)), 0)
    nus = nu_oracle(m)
    inv = minor_invariants(m, transposed=True)
    scale = max(1.0, np.prod(nus**2 + abs(x)))
    assert g_eval(inv, x) == pytest.approx(-2 * np.prod(nus**2 - x), abs=1e-9 * scale)
    for v in nus:
        assert abs(g_eval(inv, v**2)) <= 1e-8 * max(1.0, np.prod(nus**2 + v**2))


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 3))
def test_oracle_equivalence_state_and_pt(seed, n):
    m = random_mixed_matrix(n, np.random.default_rng(seed))
    for g in [m] + [partial_transpose(m, k) for k in range(n)]:
        got = minor_invariants(g).as_array()
        want = invariants_from_nu(nu_oracle(g)).as_array()
        assert np.allclose(got, want, rtol=1e-9, atol=0)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 3), scale=st.floats(0.05, 0.8))
def test_symplectic_invariance(seed, n, scale):
    rng = np.random.default_rng(seed)
    m = random_mixed_matrix(n, rng)
    S = random_symplectic(n, rng, scale)
    assert np.allclose(minor_invariants(S @ m @ S.T).as_array(), minor_invariants(m).as_array(), rtol=1e-9)
    assert np.allclose(symplectic_eigenvalues(S @ m @ S.T), symplectic_eigenvalues(m), rtol=1e-9)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 3))
def test_partial_transpose_relations(seed, n):
    m = random_mixed_matrix(n, np.random.default_rng(seed))
    inv = minor_invariants(m)
    pt = minor_invariants(partial_transpose(m, 0), transposed=True)
    d = coupling_determinants(m)
    assert pt[0] == pytest.approx(inv[0], rel=1e-12)
    if n == 2:
        assert pt[1] == pytest.approx(inv[1] - 4 * d["x"], rel=1e-9, abs=1e-9)
    else:
        assert pt[1] == pytest.approx(inv[1] - 4 * d["Dx"] - 4 * d["Dy"], rel=1e-9, abs=1e-9)
        assert pt[2] == pytest.approx(inv[2] - 4 * d["x"] - 4 * d["z"], rel=1e-9, abs=1e-9)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 3), mode=st.integers(0, 2))
def test_at_most_one_pt_eigenvalue_below_half(seed, n, mode):
    m = random_mixed_matrix(n, np.random.default_rng(seed), nth_max=0.3, scale=0.8)
    nus = symplectic_eigenvalues(partial_transpose(m, mode % n))
    assert np.count_nonzero(nus < 0.5 - 1e-10) <= 1
