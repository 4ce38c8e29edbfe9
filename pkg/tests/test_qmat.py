"""Kernel tests: Kronecker, spectra, structural reshuffles."""

import numpy as np
import pytest

from belldiag.qmat import (
    DensityMatrix,
    hermitian_spectrum,
    kron,
    partial_trace,
    partial_transpose,
    realign,
    singular_values,
)
from belldiag.weyl import standard_basis, weyl_op


def random_density(d1, d2, rng, rank=None):
    n = d1 * d2
    rank = rank or n
    m = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    rho = m @ m.conj().T
    rho /= np.trace(rho).real
    return DensityMatrix(matrix=(rho + rho.conj().T) / 2, dims=(d1, d2))


def test_kron_identities():
    assert np.allclose(kron(np.eye(2), np.eye(2)), np.eye(4))
    assert np.allclose(kron(np.diag([1, -1]), np.eye(2)), np.diag([1, 1, -1, -1]))


def test_kron_weyl_pair_is_permutation():
    # W_{0,1} at d=2 is the bit flip; X ⊗ conj(X) is the anti-diagonal permutation.
    w = weyl_op(2, (0, 1))
    t = kron(w, w.conj())
    expected = np.array(
        [[0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0]], dtype=complex
    )
    assert np.allclose(t, expected)
    assert np.allclose(t @ t.conj().T, np.eye(4))


def test_hermitian_spectrum_sorted_and_orthonormal():
    w, v = hermitian_spectrum(np.diag([3.0, 1.0, 2.0]))
    assert np.allclose(w, [1.0, 2.0, 3.0])
    assert np.allclose(v.conj().T @ v, np.eye(3), atol=1e-10)


def test_hermitian_spectrum_rejects_non_hermitian():
    m = np.array([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(ValueError, match="not Hermitian"):
        hermitian_spectrum(m)


def test_hermitian_reconstruction():
    rng = np.random.default_rng(11)
    for _ in range(20):
        n = int(rng.integers(2, 10))
        m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        m = (m + m.conj().T) / 2
        w, v = hermitian_spectrum(m)
        rebuilt = (v * w) @ v.conj().T
        assert np.linalg.norm(rebuilt - m) < 1e-9


def test_singular_values_basics():
    assert np.allclose(singular_values(np.eye(3)), [1, 1, 1])
    assert np.allclose(singular_values(np.zeros((4, 4))), 0)


def test_realign_of_maximally_mixed():
    rho = DensityMatrix(matrix=np.eye(9, dtype=complex) / 9, dims=(3, 3))
    s = singular_values(realign(rho))
    assert abs(s[0] - 1 / 3) < 1e-12
    assert np.all(s[1:] < 1e-12)


def test_realign_of_bell_projector_detects():
    basis = standard_basis(3)
    rho = DensityMatrix(matrix=basis.projector((0, 0)), dims=(3, 3))
    assert abs(singular_values(realign(rho)).sum() - 3.0) < 1e-10


def test_partial_transpose_of_bell_projector():
    for d, expected_min in [(2, -0.5), (3, -1 / 3)]:
        basis = standard_basis(d)
        pt = partial_transpose(basis.projector((0, 0)), (d, d))
        w = np.linalg.eigvalsh(pt)
        assert abs(w[0] - expected_min) < 1e-12
    # d=2: the full partial-transposed spectrum is {1/2, 1/2, 1/2, -1/2}
    pt = partial_transpose(standard_basis(2).projector((0, 0)), (2, 2))
    assert np.allclose(np.sort(np.linalg.eigvalsh(pt)), [-0.5, 0.5, 0.5, 0.5])


def test_product_state_maps():
    rng = np.random.default_rng(5)
    for d1, d2 in [(2, 2), (2, 3), (3, 3)]:
        a = random_density(d1, 1, rng).matrix
        b = random_density(d2, 1, rng).matrix
        rho = kron(a, b)
        pt = partial_transpose(rho, (d1, d2))
        assert np.allclose(pt, kron(a, b.T))
        assert np.linalg.eigvalsh(pt)[0] > -1e-12
        assert np.allclose(partial_trace(rho, 1, (d1, d2)), a, atol=1e-12)
        assert np.allclose(partial_trace(rho, 2, (d1, d2)), b, atol=1e-12)


def test_partial_trace_of_bell_projector_is_maximally_mixed():
    basis = standard_basis(3)
    p = basis.projector((1, 2))
    for keep in (1, 2):
        assert np.allclose(partial_trace(p, keep, (3, 3)), np.eye(3) / 3, atol=1e-12)


def test_partial_trace_invalid_subsystem():
    with pytest.raises(ValueError, match="keep"):
        partial_trace(np.eye(4), 3, (2, 2))


def test_reshuffles_are_linear_involutions():
    rng = np.random.default_rng(13)
    for d in range(2, 6):
        for _ in range(25):
            rho = random_density(d, d, rng)
            m = rho.matrix
            assert np.max(np.abs(partial_transpose(partial_transpose(m, (d, d)), (d, d)) - m)) < 1e-12
            assert np.max(np.abs(realign(realign(m, (d, d)), (d, d)) - m)) < 1e-12
            sigma = random_density(d, d, rng).matrix
            lam = rng.random()
            mix = lam * m + (1 - lam) * sigma
            assert np.max(np.abs(
                partial_transpose(mix, (d, d))
                - lam * partial_transpose(m, (d, d))
                - (1 - lam) * partial_transpose(sigma, (d, d))
            )) < 1e-12
            assert abs(np.trace(partial_transpose(m, (d, d))) - np.trace(m)) < 1e-12
            pt = partial_transpose(m, (d, d))
            assert np.max(np.abs(pt - pt.conj().T)) < 1e-12


def test_realignment_never_flags_products():
    rng = np.random.default_rng(17)
    for _ in range(500):
        d1, d2 = int(rng.integers(2, 5)), int(rng.integers(2, 5))
        a = random_density(d1, 1, rng, rank=int(rng.integers(1, d1 + 1))).matrix
        b = random_density(d2, 1, rng, rank=int(rng.integers(1, d2 + 1))).matrix
        rho = kron(a, b)
        assert singular_values(realign(rho, (d1, d2))).sum() <= 1 + 1e-9


def test_density_matrix_validation():
    with pytest.raises(ValueError, match="trace"):
        DensityMatrix.make(np.eye(4), (2, 2))
    with pytest.raises(ValueError, match="Hermitian"):
        m = np.eye(4, dtype=complex) / 4
        m[0, 1] = 0.5
        DensityMatrix.make(m, (2, 2))
    with pytest.raises(ValueError, match="dims"):
        DensityMatrix.make(np.eye(4) / 4, (2, 3))
    ok = DensityMatrix.make(np.eye(4) / 4, (2, 2))
    assert ok.dims == (2, 2)
