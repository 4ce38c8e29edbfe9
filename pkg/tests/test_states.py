"""Simplex sampling, state assembly and the slice family."""

import numpy as np
import pytest

from belldiag.qmat import partial_trace, partial_transpose
from belldiag.rng import substream
from belldiag.states import (
    BellDiagonalState,
    assemble_density,
    family_coefficients,
    family_state,
    random_phase_matrix,
    random_product_state,
    random_separable,
    sample_simplex,
    simplex_sample_for_state,
)
from belldiag.weyl import PhaseMatrix, gen_bell_basis, standard_basis


def test_sample_simplex_is_a_simplex_point():
    rng = np.random.default_rng(1)
    for _ in range(50):
        c = sample_simplex(3, rng)
        assert c.shape == (3, 3)
        assert np.min(c) >= 0
        assert abs(c.sum() - 1) < 1e-12
        assert c.max() <= 1 / 3  # enclosure restriction
    flat = sample_simplex(3, rng, enclosure=False)
    assert abs(flat.sum() - 1) < 1e-12


def test_sample_simplex_deterministic_replay():
    a = sample_simplex(4, substream(99, "c", 7))
    b = sample_simplex(4, substream(99, "c", 7))
    assert np.array_equal(a, b)
    c = simplex_sample_for_state(99, 7, 4)
    assert np.array_equal(a, c)
    assert not np.array_equal(a, simplex_sample_for_state(99, 8, 4))


def test_sample_simplex_coordinate_means():
    # Coordinates are exchangeable and sum to 1, so each has mean 1/9; the
    # flat-Dirichlet variance (K-1)/(K^2 (K+1)) upper-bounds the restricted
    # variance, giving a conservative 3-sigma band.
    n, k = 100_000, 9
    draws = np.array([simplex_sample_for_state(5, i, 3).ravel() for i in range(n)])
    var = (k - 1) / (k**2 * (k + 1))
    tol = 3 * np.sqrt(var / n)
    assert np.all(np.abs(draws.mean(axis=0) - 1 / k) < tol)
    assert draws.max() <= 1 / 3


def test_assemble_density_spectrum_is_coefficients():
    rng = np.random.default_rng(2)
    basis = gen_bell_basis(PhaseMatrix.from_angles(rng.uniform(0, 2 * np.pi, (3, 3))))
    c = sample_simplex(3, rng)
    state = BellDiagonalState(d=3, c=c, basis_ref=basis.key)
    rho = assemble_density(state, basis)
    w = np.linalg.eigvalsh(rho.matrix)
    assert np.max(np.abs(w - np.sort(c.ravel()))) < 1e-12


def test_assemble_density_special_points():
    basis = standard_basis(3)
    uniform = BellDiagonalState(d=3, c=np.full((3, 3), 1 / 9), basis_ref=basis.key)
    assert np.max(np.abs(assemble_density(uniform, basis).matrix - np.eye(9) / 9)) < 1e-12
    point = np.zeros((3, 3))
    point[0, 0] = 1.0
    pure = BellDiagonalState(d=3, c=point, basis_ref=basis.key)
    assert np.max(np.abs(assemble_density(pure, basis).matrix - basis.projector((0, 0)))) < 1e-12


def test_assemble_density_is_affine():
    rng = np.random.default_rng(3)
    basis = standard_basis(3)
    c1, c2 = sample_simplex(3, rng), sample_simplex(3, rng)
    lam = 0.3
    mix = BellDiagonalState(d=3, c=lam * c1 + (1 - lam) * c2, basis_ref=basis.key)
    s1 = BellDiagonalState(d=3, c=c1, basis_ref=basis.key)
    s2 = BellDiagonalState(d=3, c=c2, basis_ref=basis.key)
    lhs = assemble_density(mix, basis).matrix
    rhs = lam * assemble_density(s1, basis).matrix + (1 - lam) * assemble_density(s2, basis).matrix
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_assemble_density_rejects_basis_mismatch():
    basis3 = standard_basis(3)
    state = BellDiagonalState(d=3, c=np.full((3, 3), 1 / 9), basis_ref="standard:d=4")
    with pytest.raises(ValueError, match="basis"):
        assemble_density(state, basis3)


def test_family_coefficients_at_origin():
    c, valid = family_coefficients(0.0, 0.0)
    assert valid
    q9 = (1 - 1 / np.sqrt(3)) / 9
    assert abs(c[0, 0] - q9) < 1e-12
    assert abs(c[0, 1] - q9) < 1e-12
    assert abs(c[2, 0] - 0.04696) < 5e-6
    assert abs(c[1, 0] - 0.23941) < 5e-6
    assert abs(c.sum() - 1.0) < 1e-12


def test_family_matches_direct_mixture_at_origin():
    basis = standard_basis(3)
    state = family_state(0.0, 0.0, basis)
    rho = assemble_density(state, basis).matrix
    q = 1 - 1 / np.sqrt(3)
    direct = q * np.eye(9) / 9
    direct = direct + (1 / (3 * np.sqrt(3))) * sum(
        basis.projector((1, l)) for l in range(3)
    )
    assert np.linalg.norm(rho - direct) < 1e-12


def test_family_sum_and_validity_boundary():
    rng = np.random.default_rng(8)
    for _ in range(200):
        a, b = rng.uniform(-2, 4, size=2)
        c, valid = family_coefficients(a, b)
        assert abs(c.sum() - 1.0) < 1e-12 or not valid
    # large negative a drives c[0,0] below zero
    _, valid = family_coefficients(-3.0, 0.0)
    assert not valid
    assert family_state(-3.0, 0.0, standard_basis(3)) is None


def test_family_valid_region_is_convex_on_segments():
    basis = standard_basis(3)
    rng = np.random.default_rng(9)
    pts = [(a, b) for a in np.linspace(-1, 3, 9) for b in np.linspace(-1, 3, 9)
           if family_state(a, b, basis) is not None]
    for _ in range(100):
        (a1, b1), (a2, b2) = [pts[i] for i in rng.integers(0, len(pts), 2)]
        t = rng.random()
        mid = (a1 * t + a2 * (1 - t), b1 * t + b2 * (1 - t))
        assert family_state(mid[0], mid[1], basis) is not None


def test_family_requires_d3():
    with pytest.raises(ValueError, match="d=3"):
        family_state(0.0, 0.0, standard_basis(2))


def test_random_phase_matrix_modes():
    rng = np.random.default_rng(10)
    full = random_phase_matrix(3, rng, mode="full")
    assert np.max(np.abs(np.abs(full.alpha) - 1)) < 1e-12
    small = random_phase_matrix(3, rng, mode="small", eps=1e-3)
    assert np.max(small.angles()) < 1e-3
    with pytest.raises(ValueError, match="eps"):
        random_phase_matrix(3, rng, mode="small", eps=0.0)
    a = random_phase_matrix(3, substream(1, "alpha", 4), mode="full")
    b = random_phase_matrix(3, substream(1, "alpha", 4), mode="full")
    assert np.array_equal(a.alpha, b.alpha)


def test_random_product_state_properties():
    rng = np.random.default_rng(12)
    for _ in range(20):
        ps = random_product_state(3, rng)
        rho = ps.density()
        pt = partial_transpose(rho.matrix, (3, 3))
        assert np.linalg.eigvalsh(pt)[0] > -1e-12
        for keep in (1, 2):
            red = partial_trace(rho.matrix, keep, (3, 3))
            w = np.linalg.eigvalsh(red)
            assert abs(w[-1] - 1.0) < 1e-10  # reduced states are pure


def test_random_product_state_haar_mean():
    rng = np.random.default_rng(14)
    acc = np.zeros((3, 3), dtype=complex)
    n = 10_000
    for _ in range(n):
        psi = random_product_state(3, rng).psi1
        acc += np.outer(psi, psi.conj())
    acc /= n
    # Haar average is the maximally mixed state; se of each entry ~ 1/(3 sqrt(n))
    assert np.max(np.abs(acc - np.eye(3) / 3)) < 3 / (3 * np.sqrt(n)) * 3


def test_random_separable_is_ppt():
    rng = np.random.default_rng(15)
    for terms in (1, 5, 20):
        rho = random_separable(3, terms, rng)
        pt = partial_transpose(rho)
        assert np.linalg.eigvalsh(pt)[0] > -1e-10
        assert abs(np.trace(rho.matrix).real - 1) < 1e-12


def test_coefficient_state_validation():
    with pytest.raises(ValueError, match="negative"):
        BellDiagonalState(d=2, c=np.array([[1.2, -0.2], [0.0, 0.0]]), basis_ref="x")
    with pytest.raises(ValueError, match="sum"):
        BellDiagonalState(d=2, c=np.full((2, 2), 0.3), basis_ref="x")
