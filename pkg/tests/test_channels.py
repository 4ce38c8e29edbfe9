"""Projection/twirl channel equivalence and its loss for generalized bases."""

import numpy as np
import pytest

from belldiag.channels import (
    channel_equiv_defect,
    pauli_channel,
    random_test_state,
    sep_conservation_check,
    twirl_channel,
    witness_pairing,
)
from belldiag.qmat import DensityMatrix
from belldiag.states import (
    BellDiagonalState,
    assemble_density,
    random_phase_matrix,
    random_separable,
    sample_simplex,
)
from belldiag.weyl import PhaseMatrix, gen_bell_basis, standard_basis, twirl_op


def haar_density(d, rng):
    v = rng.standard_normal(d * d) + 1j * rng.standard_normal(d * d)
    v /= np.linalg.norm(v)
    return DensityMatrix(matrix=np.outer(v, v.conj()), dims=(d, d))


def test_pauli_channel_idempotent_on_diagonal_states():
    rng = np.random.default_rng(1)
    basis = standard_basis(3)
    c = sample_simplex(3, rng)
    state = BellDiagonalState(d=3, c=c, basis_ref=basis.key)
    image = pauli_channel(assemble_density(state, basis), basis)
    assert np.max(np.abs(image.c - c)) < 1e-12


def test_pauli_channel_kills_coherences():
    basis = standard_basis(3)
    # state built from a superposition of two basis states: its projection
    # must keep only the two matching diagonal weights
    v = (basis.state((0, 0)) + basis.state((0, 1))) / np.sqrt(2)
    rho = DensityMatrix(matrix=np.outer(v, v.conj()), dims=(3, 3))
    c = pauli_channel(rho, basis).c
    expected = np.zeros((3, 3))
    expected[0, 0] = expected[0, 1] = 0.5
    assert np.max(np.abs(c - expected)) < 1e-12


def test_pauli_channel_matches_change_of_basis_oracle():
    # Independent route: rotate rho into the Bell basis and read the diagonal.
    rng = np.random.default_rng(2)
    basis = standard_basis(3)
    for _ in range(20):
        rho = haar_density(3, rng)
        u = basis.state_matrix()
        diag = np.diag(u.conj().T @ rho.matrix @ u).real
        c = pauli_channel(rho, basis).c.ravel()
        assert np.max(np.abs(c - diag)) < 1e-12


def test_twirl_channel_unital_and_trace_preserving():
    rng = np.random.default_rng(3)
    for d in (2, 3):
        basis = standard_basis(d)
        mixed = DensityMatrix(matrix=np.eye(d * d, dtype=complex) / (d * d), dims=(d, d))
        out = twirl_channel(mixed, basis)
        assert np.max(np.abs(out.matrix - mixed.matrix)) < 1e-12
        for _ in range(10):
            rho = haar_density(d, rng)
            out = twirl_channel(rho, basis)
            assert abs(np.trace(out.matrix).real - 1) < 1e-12
            assert np.linalg.eigvalsh(out.matrix)[0] > -1e-9


def test_channel_equivalence_standard_basis():
    rng = np.random.default_rng(4)
    for d in (2, 3, 4, 5):
        basis = standard_basis(d)
        assert channel_equiv_defect(basis, 25, rng) < 1e-10


def test_channel_equivalence_all_ones_phases():
    rng = np.random.default_rng(5)
    basis = gen_bell_basis(PhaseMatrix.ones(3))
    assert channel_equiv_defect(basis, 25, rng) < 1e-10


def test_channel_equivalence_broken_for_random_phases():
    rng = np.random.default_rng(6)
    broken = 0
    for _ in range(30):
        basis = gen_bell_basis(random_phase_matrix(3, rng, mode="full"))
        if channel_equiv_defect(basis, 8, rng) > 1e-4:
            broken += 1
    assert broken >= 29


def test_twirl_channel_idempotent_standard():
    rng = np.random.default_rng(7)
    basis = standard_basis(3)
    rho = haar_density(3, rng)
    once = twirl_channel(rho, basis)
    twice = twirl_channel(once, basis)
    assert np.max(np.abs(twice.matrix - once.matrix)) < 1e-10


def test_twirl_channel_commutes_with_single_twirls():
    rng = np.random.default_rng(8)
    basis = standard_basis(3)
    rho = haar_density(3, rng)
    out = twirl_channel(rho, basis).matrix
    for i in range(3):
        for j in range(3):
            t = twirl_op(3, (i, j))
            conj_then_channel = twirl_channel(
                DensityMatrix(matrix=t @ rho.matrix @ t.conj().T, dims=(3, 3)), basis
            ).matrix
            channel_then_conj = t @ out @ t.conj().T
            assert np.max(np.abs(conj_then_channel - channel_then_conj)) < 1e-10


def test_pauli_projection_idempotent():
    rng = np.random.default_rng(9)
    basis = standard_basis(3)
    rho = haar_density(3, rng)
    once = pauli_channel(rho, basis)
    again = pauli_channel(assemble_density(once, basis), basis)
    assert np.max(np.abs(once.c - again.c)) < 1e-12


def test_separability_conserved_standard():
    rng = np.random.default_rng(10)
    basis = standard_basis(3)
    for _ in range(50):
        rho_s = random_separable(3, int(rng.integers(1, 8)), rng)
        report = sep_conservation_check(rho_s, basis)
        assert report.is_diagonal
        assert report.is_ppt


def test_separability_breaking_found_for_random_phases():
    rng = np.random.default_rng(11)
    found = False
    for _ in range(20):
        basis = gen_bell_basis(random_phase_matrix(3, rng, mode="full"))
        for _ in range(20):
            rho_s = random_separable(3, 1, rng)
            if not sep_conservation_check(rho_s, basis).is_ppt:
                found = True
                break
        if found:
            break
    assert found


def test_witness_pairing_identity():
    rng = np.random.default_rng(12)
    basis = standard_basis(3)
    for _ in range(50):
        kappa = rng.standard_normal((3, 3))
        rho = random_test_state(3, rng, basis)
        before, after = witness_pairing(kappa, rho, basis)
        assert abs(before - after) < 1e-12
    # the identity is internal to any orthonormal Bell basis
    gen = gen_bell_basis(random_phase_matrix(3, rng, mode="full"))
    for _ in range(20):
        kappa = rng.standard_normal((3, 3))
        rho = random_test_state(3, rng, gen)
        before, after = witness_pairing(kappa, rho, gen)
        assert abs(before - after) < 1e-12


def test_witness_pairing_point_mass():
    basis = standard_basis(3)
    rng = np.random.default_rng(13)
    rho = haar_density(3, rng)
    kappa = np.zeros((3, 3))
    kappa[0, 0] = 1.0
    before, after = witness_pairing(kappa, rho, basis)
    expected = np.vdot(basis.state((0, 0)), rho.matrix @ basis.state((0, 0))).real
    assert abs(before - expected) < 1e-12
    assert abs(after - expected) < 1e-12


def test_channels_positivity_over_random_inputs():
    rng = np.random.default_rng(14)
    for d in (2, 3, 4):
        basis = standard_basis(d)
        for _ in range(20):
            rho = random_test_state(d, rng, basis)
            t_img = twirl_channel(rho, basis).matrix
            assert abs(np.trace(t_img).real - 1) < 1e-12
            assert np.linalg.eigvalsh(t_img)[0] > -1e-9
            p_img = assemble_density(pauli_channel(rho, basis), basis).matrix
            assert np.linalg.eigvalsh(p_img)[0] > -1e-9


def test_dim_mismatch_rejected():
    rng = np.random.default_rng(15)
    rho2 = haar_density(2, rng)
    with pytest.raises(ValueError, match="dims"):
        pauli_channel(rho2, standard_basis(3))
    with pytest.raises(ValueError, match="trials"):
        channel_equiv_defect(standard_basis(2), 0, rng)
