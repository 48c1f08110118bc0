import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphsamp import linalg_core as lc
from graphsamp.errors import NonSymmetric, NotPositiveDefinite, RankDeficient

from conftest import random_spd

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_sym_eig_identity():
    pair = lc.sym_eig(np.eye(3))
    np.testing.assert_array_equal(pair.eigenvalues, [1, 1, 1])
    np.testing.assert_allclose(pair.eigenvectors.T @ pair.eigenvectors, np.eye(3), atol=1e-14)
    np.testing.assert_allclose(np.abs(pair.eigenvectors), np.eye(3), atol=1e-14)


def test_sym_eig_diagonal_descending():
    pair = lc.sym_eig(np.diag([3.0, -1.0]))
    np.testing.assert_allclose(pair.eigenvalues, [3, -1])
    np.testing.assert_allclose(pair.eigenvectors, np.eye(2), atol=1e-14)


def test_sym_eig_swap_matrix():
    a = np.array([[0.0, 1.0], [1.0, 0.0]])
    pair = lc.sym_eig(a)
    np.testing.assert_allclose(pair.eigenvalues, [1, -1], atol=1e-14)
    v = pair.eigenvectors
    np.testing.assert_allclose(v @ np.diag(pair.eigenvalues) @ v.T, a, atol=1e-12)
    np.testing.assert_allclose(np.abs(v[:, 0]), [2**-0.5] * 2, atol=1e-14)
    np.testing.assert_allclose(v[:, 0] * v[:, 1].sum(), 0, atol=1e-14)  # second column is (1, -1)/sqrt2 up to sign


def test_sym_eig_sign_convention():
    v = lc.sym_eig(np.array([[2.0, 1.0, 0.0], [1.0, 2.0, 1.0], [0.0, 1.0, 2.0]])).eigenvectors
    pivots = np.argmax(np.abs(v), axis=0)
    assert np.all(v[pivots, np.arange(3)] > 0)


def test_sym_eig_rejects_asymmetric():
    with pytest.raises(NonSymmetric):
        lc.sym_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))


@settings(max_examples=30, deadline=None)
@given(seed=seeds, n=st.integers(1, 200))
def test_sym_eig_invariants(seed, n):
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, n))
    a = g + g.T
    pair = lc.sym_eig(a)
    v, w = pair.eigenvectors, pair.eigenvalues
    assert np.max(np.abs(v.T @ v - np.eye(n))) <= 1e-8
    assert np.max(np.abs(a - v @ np.diag(w) @ v.T)) <= 1e-8 * np.max(np.abs(a))
    assert np.all(np.diff(w) <= 0)


def test_sym_eig_deterministic():
    rng = np.random.default_rng(1)
    g = rng.standard_normal((30, 30))
    a, b = lc.sym_eig(g + g.T), lc.sym_eig(g + g.T)
    np.testing.assert_array_equal(a.eigenvectors, b.eigenvectors)


def test_projector_axis():
    np.testing.assert_allclose(lc.orth_complement_projector([[1.0, 0.0]]), [[0, 0], [0, 1]], atol=1e-15)


def test_projector_full_row_space():
    np.testing.assert_allclose(lc.orth_complement_projector(np.eye(4)), np.zeros((4, 4)), atol=1e-15)


def test_projector_oblique_row():
    # I - b^T b / |b|^2 with b = (0.6, 0.8), |b| = 1
    p = lc.orth_complement_projector([[0.6, 0.8]])
    np.testing.assert_allclose(p, [[0.64, -0.48], [-0.48, 0.36]], atol=1e-15)
    np.testing.assert_allclose(p @ p, p, atol=1e-15)


def test_projector_rank_deficient():
    with pytest.raises(RankDeficient):
        lc.orth_complement_projector([[1.0, 2.0], [2.0, 4.0]])
    with pytest.raises(RankDeficient):
        lc.orth_complement_projector(np.ones((3, 2)))


@settings(max_examples=50, deadline=None)
@given(seed=seeds, k=st.integers(2, 30), data=st.data())
def test_projector_properties(seed, k, data):
    s = data.draw(st.integers(1, k))
    b = np.random.default_rng(seed).standard_normal((s, k))
    p = lc.orth_complement_projector(b)
    assert np.max(np.abs(p - p.T)) <= 1e-10
    assert np.max(np.abs(p @ p - p)) <= 1e-10
    assert np.max(np.abs(p @ b.T)) <= 1e-10


@pytest.mark.parametrize(
    "a, b, expected",
    [
        (np.eye(2), [3.0, 4.0], [3.0, 4.0]),
        ([[2.0]], [6.0], [3.0]),
        ([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]], [1.0, 1.0, 2.0], [1.0, 1.0]),
    ],
)
def test_least_squares_examples(a, b, expected):
    np.testing.assert_allclose(lc.solve_least_squares(a, b), expected, atol=1e-14)


def test_least_squares_rank_deficient():
    with pytest.raises(RankDeficient):
        lc.solve_least_squares([[1.0, 1.0], [2.0, 2.0], [3.0, 3.0]], [1.0, 2.0, 3.0])


def test_least_squares_matches_normal_equations(rng):
    a = rng.standard_normal((12, 4))
    b = rng.standard_normal(12)
    z = lc.solve_least_squares(a, b)
    np.testing.assert_allclose(a.T @ (a @ z - b), 0, atol=1e-12)


@pytest.mark.parametrize(
    "a, b, q, expected",
    [
        (np.eye(2), [1.0, 2.0], np.eye(2), [1.0, 2.0]),
        (np.eye(2), [1.0, 2.0], np.diag([4.0, 9.0]), [1.0, 2.0]),
        # weighted mean (2/1 + 5/4) / (1 + 1/4) = 2.6
        ([[1.0], [1.0]], [2.0, 5.0], np.diag([1.0, 4.0]), [2.6]),
    ],
)
def test_gls_examples(a, b, q, expected):
    np.testing.assert_allclose(lc.solve_gls(a, b, q), expected, rtol=1e-14)


def test_gls_rejects_indefinite_weight():
    with pytest.raises(NotPositiveDefinite):
        lc.solve_gls(np.eye(2), [1.0, 1.0], np.diag([1.0, -1.0]))


def test_gls_against_whitened_least_squares(rng):
    # independent route: whiten with the inverse symmetric square root of Q
    a = rng.standard_normal((15, 5))
    b = rng.standard_normal(15)
    q = random_spd(rng, 15)
    w, v = np.linalg.eigh(q)
    q_inv_half = v @ np.diag(w**-0.5) @ v.T
    expected, *_ = np.linalg.lstsq(q_inv_half @ a, q_inv_half @ b, rcond=None)
    np.testing.assert_allclose(lc.solve_gls(a, b, q), expected, rtol=1e-9)


@settings(max_examples=50, deadline=None)
@given(seed=seeds, k=st.integers(1, 10), extra=st.integers(0, 20), sigma=st.floats(1e-3, 1e3))
def test_gls_equals_ols_under_white_noise(seed, k, extra, sigma):
    rng = np.random.default_rng(seed)
    m = k + extra
    a = rng.standard_normal((m, k))
    b = rng.standard_normal(m)
    z_gls = lc.solve_gls(a, b, sigma**2 * np.eye(m))
    z_ols = lc.solve_least_squares(a, b)
    assert np.linalg.norm(z_gls - z_ols) <= 1e-10 * max(np.linalg.norm(z_ols), 1e-300)


@pytest.mark.parametrize(
    "a, expected",
    [
        (np.eye(3), (1.0, 1.0)),
        (np.diag([2.0, 5.0]), (2.0, 5.0)),
        # shear singular values are (sqrt5 -+ 1)/2; product = |det| = 1
        ([[1.0, 1.0], [0.0, 1.0]], ((5**0.5 - 1) / 2, (5**0.5 + 1) / 2)),
    ],
)
def test_extreme_singular_values(a, expected):
    smin, smax = lc.extreme_singular_values(a)
    np.testing.assert_allclose((smin, smax), expected, rtol=1e-12)


def test_shear_product_is_det():
    smin, smax = lc.extreme_singular_values([[1.0, 1.0], [0.0, 1.0]])
    assert smin * smax == pytest.approx(1.0, rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(seed=seeds, n=st.integers(2, 8))
def test_singular_value_properties(seed, n):
    a = np.random.default_rng(seed).standard_normal((n, n))
    smin, smax = lc.extreme_singular_values(a)
    assert smax >= smin >= 0
    det = abs(np.linalg.det(a))
    # |det| is the product of all n singular values
    assert smin**n <= det * (1 + 1e-9) and det <= smax**n * (1 + 1e-9)
    np.testing.assert_allclose(lc.extreme_singular_values(a.T), (smin, smax), rtol=1e-10)
    if n == 2:
        assert smin * smax == pytest.approx(det, rel=1e-10)


def test_pd_factor_examples():
    np.testing.assert_allclose(lc.pd_factor(np.eye(2)), np.eye(2))
    np.testing.assert_allclose(lc.pd_factor(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))
    q = np.array([[2.0, 1.0], [1.0, 2.0]])
    f = lc.pd_factor(q)
    np.testing.assert_allclose(f @ f.T, q, atol=1e-14)


def test_pd_factor_rejects_semidefinite():
    with pytest.raises(NotPositiveDefinite):
        lc.pd_factor(np.ones((2, 2)))


@settings(max_examples=30, deadline=None)
@given(seed=seeds, n=st.integers(1, 40), eps=st.floats(1e-6, 1.0))
def test_pd_factor_round_trip(seed, n, eps):
    q = random_spd(np.random.default_rng(seed), n, eps)
    f = lc.pd_factor(q)
    assert np.max(np.abs(f @ f.T - q)) <= 1e-10 * np.max(np.abs(q))
