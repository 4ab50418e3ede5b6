import cmath

import numpy as np
import pytest

from spectral import cmv, szego
from spectral.circle import CirclePoint
from spectral.errors import OutsideDiskError, SizeMismatchError
from spectral.rankone import unitarity_defect


def random_word(rng, size, radius=0.9):
    return radius * np.sqrt(rng.uniform(size=size)) * np.exp(2j * np.pi * rng.uniform(size=size))


@pytest.mark.parametrize(
    "gamma, expected",
    [
        (0, [[0, 1], [1, 0]]),
        (1, [[1, 0], [0, -1]]),
        (0.5, [[0.5, np.sqrt(3) / 2], [np.sqrt(3) / 2, -0.5]]),
    ],
)
def test_theta(gamma, expected):
    np.testing.assert_allclose(cmv.theta(gamma).entries, expected, atol=1e-15)


def test_theta_rejects_large_gamma():
    with pytest.raises(OutsideDiskError):
        cmv.theta(1.01)


def test_build_small_cases():
    np.testing.assert_allclose(cmv.build([0], 1).dense, [[0, 1], [1, 0]])
    beta = cmath.exp(0.4j)
    np.testing.assert_allclose(cmv.build([], beta).dense, [[np.conj(beta)]])
    np.testing.assert_allclose(cmv.build([0.5], 1).eigenvalues(), [1, -1], atol=1e-12)


def test_build_m_tilde():
    np.testing.assert_allclose(cmv.build_m_tilde([], 1).dense, [[-1]])
    tilde = cmv.build_m_tilde([0], 1)
    np.testing.assert_allclose(tilde.dense, [[0, 1], [-1, 0]])
    np.testing.assert_allclose(tilde.eigenvalues(), [1j, -1j], atol=1e-12)


def test_m_tilde_differs_by_rank_one():
    diff = cmv.build([0.3 + 0.4j], 1j).dense - cmv.build_m_tilde([0.3 + 0.4j], 1j).dense
    sv = np.linalg.svd(diff, compute_uv=False)
    assert sv[0] > 1 and sv[1] < 1e-12


def test_build_is_five_diagonal_and_unitary():
    rng = np.random.default_rng(1)
    c = cmv.build(random_word(rng, 9), cmath.exp(0.2j)).dense
    assert cmv.is_five_diagonal(c)
    np.testing.assert_allclose(c.conj().T @ c, np.eye(10), atol=1e-12)


def test_char_poly_small_cases():
    np.testing.assert_allclose(cmv.char_poly(cmv.build([0], 1)).coefficients, [-1, 0, 1], atol=1e-12)
    np.testing.assert_allclose(cmv.char_poly(cmv.build([0.5], 1)).coefficients, [-1, 0, 1], atol=1e-12)
    beta = cmath.exp(1.3j)
    np.testing.assert_allclose(cmv.char_poly(cmv.build([], beta)).coefficients, [-np.conj(beta), 1], atol=1e-12)


def test_char_poly_matches_paraorthogonal_polynomial():
    rng = np.random.default_rng(2)
    for _ in range(25):
        n = int(rng.integers(1, 31))
        word = random_word(rng, n - 1, radius=0.95)
        beta = cmath.exp(2j * np.pi * rng.uniform())
        expected = szego.popuc_first(word, beta, n)
        assert cmv.char_poly(cmv.build(word, beta)).allclose(expected, atol=1e-8)


def test_truncation_char_poly_is_orthogonal_polynomial():
    rng = np.random.default_rng(3)
    word = random_word(rng, 8)
    for n in (1, 4, 8):
        assert cmv.char_poly(cmv.truncated(word, n)).allclose(szego.phi(word, n), atol=1e-10)


def test_rank_one_completion_examples():
    beta = cmath.exp(0.9j)
    assert cmv.rank_one_completion(0, beta).near(np.conj(beta))
    assert cmv.rank_one_completion(0.5, 1).near(1)
    assert abs(cmv.completion_det(0.5, 1, 1)) < 1e-15


def test_rank_one_completion_makes_difference_singular():
    alpha, beta = 0.3 + 0.4j, cmath.exp(1j * np.pi / 3)
    x = cmv.rank_one_completion(alpha, beta).value
    assert abs(x) == pytest.approx(1)
    assert abs(cmv.completion_det(alpha, beta, x)) < 1e-14
    sv = np.linalg.svd(cmv.theta(alpha).entries - np.diag([beta, x]), compute_uv=False)
    assert sv[1] < 1e-14


def test_split_with_trivial_boundary():
    n = 4
    parts = cmv.split(cmv.build(np.zeros(n), 1), 1)
    assert parts.decoupled.near(1)
    assert parts.reconstruction_error < 1e-14


def test_split_rotated_family_decouples_common_zero():
    lam = cmath.exp(0.3j)
    for n in range(1, 8):
        parts = cmv.split(cmv.build(np.zeros(n), np.conj(lam) ** (n + 1)), np.conj(lam) ** n)
        assert parts.decoupled.near(lam, 1e-12)
        assert not cmv.printed_lambda(0, np.conj(lam) ** n, np.conj(lam) ** (n + 1)).near(lam, 1e-3)


def test_split_random_instance():
    n = 4
    rng = np.random.default_rng(4)
    word = np.append(random_word(rng, n - 1), 0.3 - 0.2j)
    beta_n, beta_next = cmath.exp(0.7j), cmath.exp(-1.1j)
    c_next = cmv.build(word, beta_next)
    parts = cmv.split(c_next, beta_n)

    assert parts.reconstruction_error < 1e-12
    assert parts.second_singular_value < 1e-10
    np.testing.assert_allclose(parts.perturbed[:n, :n], parts.inner.dense, atol=1e-12)
    assert parts.decoupled.near(cmv.decoupling_value(0.3 - 0.2j, beta_n, beta_next), 1e-12)
    # Vφ = λUφ along the recovered direction
    phi, mult = parts.perturbation
    np.testing.assert_allclose(parts.perturbed @ phi, mult.value * (c_next.dense @ phi), atol=1e-10)


def test_split_direction_support_depends_on_host_factor():
    rng = np.random.default_rng(6)
    for n in (2, 3):
        parts = cmv.split(cmv.build(random_word(rng, n), cmath.exp(0.5j)), cmath.exp(2.0j))
        phi = parts.perturbation.direction
        lowest = n - 2 if parts.replaced_in_L else n - 1
        assert np.all(np.abs(phi[:lowest]) < 1e-12)


def test_split_rejects_size_one():
    with pytest.raises(SizeMismatchError):
        cmv.split(cmv.build([], 1), 1)


def test_krylov_cyclic():
    assert cmv.krylov_cyclic(cmv.build([0], 1), cmv.delta(2, 0)) == (True, 2)
    assert cmv.krylov_cyclic(np.eye(2), cmv.delta(2, 0)) == (False, 1)
    rng = np.random.default_rng(7)
    c = cmv.build(random_word(rng, 7), cmath.exp(0.1j))
    assert cmv.krylov_cyclic(c, cmv.delta(8, 0)).is_cyclic


@pytest.mark.parametrize("beta", [1 + 9e-11, 1j * (1 - 9e-11)])
def test_boundary_coefficient_at_the_tolerance_edge(beta):
    c = cmv.build([0.3, 0.1j], CirclePoint(beta))
    assert unitarity_defect(c.dense) <= 1e-12
    parts = cmv.split(cmv.build([0.2, 0.4], 1), CirclePoint(beta))
    assert parts.reconstruction_error < 1e-12
