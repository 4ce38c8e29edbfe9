"""Projection and twirl channels attached to a Bell basis.

For a basis {|Phi_kl>} with projectors P_kl and generating operators V_kl:

    pauli:  rho -> sum_kl <Phi_kl|rho|Phi_kl> P_kl        (diagonal projection)
    twirl:  rho -> (1/d^2) sum_ij (V_ij ⊗ conj(V_ij)) rho (V_ij ⊗ conj(V_ij))^dag

For the standard basis the two channels coincide on every input; for generic
phase-generalized bases they differ, and the projection channel stops
preserving separability.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qmat import DensityMatrix
from .states import BellDiagonalState, assemble_density, haar_state, random_separable
from .weyl import BellBasis

__all__ = [
    "pauli_channel",
    "twirl_channel",
    "twirl_unitaries",
    "channel_equiv_defect",
    "sep_conservation_check",
    "SepConservationReport",
    "witness_pairing",
    "random_test_state",
]


def _check_dims(rho: DensityMatrix, basis: BellBasis):
    if rho.dims != (basis.d, basis.d):
        raise ValueError(f"state dims {rho.dims} do not match basis dimension {basis.d}")


def pauli_channel(rho: DensityMatrix, basis: BellBasis) -> BellDiagonalState:
    """Project onto the Bell-diagonal with c[k,l] = <Phi_kl|rho|Phi_kl>.

    For PSD unit-trace input the coefficients are a simplex point up to
    round-off; tiny negatives are clamped.
    """
    _check_dims(rho, basis)
    d = basis.d
    m = basis.state_matrix()  # columns are basis states in flat (k,l) order
    c = np.einsum("ik,ij,jk->k", m.conj(), rho.matrix, m).real
    total = c.sum()
    if abs(total - 1.0) > 1e-10:
        raise ValueError(f"projection coefficients sum to {total!r}; input not unit trace?")
    c = np.clip(c, 0.0, None)
    c = c / c.sum()
    return BellDiagonalState(d=d, c=c.reshape(d, d), basis_ref=basis.key)


def twirl_unitaries(basis: BellBasis) -> np.ndarray:
    """The d^2 pair-space unitaries V_ij ⊗ conj(V_ij) of the basis, flat (i,j) order."""
    return basis.pair_unitaries


def twirl_channel(rho: DensityMatrix, basis: BellBasis) -> DensityMatrix:
    """Uniform random application of the basis twirl unitaries."""
    _check_dims(rho, basis)
    d = basis.d
    us = basis.pair_unitaries
    # sum_k U_k rho U_k^dag as one batched product plus a (k, j) contraction
    tmp = us @ rho.matrix
    m = np.tensordot(tmp, us.conj(), axes=([0, 2], [0, 2])) / (d * d)
    m = (m + m.conj().T) / 2
    return DensityMatrix(matrix=m, dims=(d, d))


def random_test_state(d: int, rng: np.random.Generator, basis: BellBasis | None = None) -> DensityMatrix:
    """A random state for channel defect searches.

    Cycles through Haar-random pure pair states, superpositions of two basis
    states (carrying the off-diagonal coherences where channel differences
    live) and random separable mixtures.
    """
    kind = rng.integers(0, 3)
    if kind == 0 or basis is None:
        v = haar_state(d * d, rng)
        return DensityMatrix(matrix=np.outer(v, v.conj()), dims=(d, d))
    if kind == 1:
        flat = basis.states.reshape(d * d, d * d)
        a, b = rng.choice(d * d, size=2, replace=False)
        v = (flat[a] + np.exp(2j * np.pi * rng.random()) * flat[b]) / np.sqrt(2)
        return DensityMatrix(matrix=np.outer(v, v.conj()), dims=(d, d))
    return random_separable(d, terms=int(rng.integers(1, 6)), rng=rng)


def channel_equiv_defect(basis: BellBasis, trials: int, rng: np.random.Generator) -> float:
    """Max Frobenius distance between the twirl image and the diagonal projection.

    Zero (to round-off) exactly when the basis twirl stabilizes the basis,
    as it does for the standard construction.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    worst = 0.0
    for _ in range(trials):
        rho = random_test_state(basis.d, rng, basis)
        t_img = twirl_channel(rho, basis).matrix
        p_img = assemble_density(pauli_channel(rho, basis), basis).matrix
        worst = max(worst, float(np.linalg.norm(t_img - p_img)))
    return worst


@dataclass(frozen=True)
class SepConservationReport:
    """Whether a separable input keeps a separability certificate after projection."""

    is_diagonal: bool  # projection image is a valid simplex point
    is_ppt: bool  # projection image passes the partial-transpose test
    min_pt_eigenvalue: float


def sep_conservation_check(rho_s: DensityMatrix, basis: BellBasis) -> SepConservationReport:
    """Project a (known separable) state and test the image for PPT.

    A negative partial transpose of the image certifies that the projection
    channel of this basis broke separability.
    """
    from .criteria import is_ppt  # local import to avoid a module cycle

    state = pauli_channel(rho_s, basis)
    is_diagonal = bool(np.min(state.c) >= 0.0 and abs(state.c.sum() - 1.0) < 1e-10)
    image = assemble_density(state, basis)
    ppt, min_eig = is_ppt(image)
    return SepConservationReport(is_diagonal=is_diagonal, is_ppt=ppt, min_pt_eigenvalue=min_eig)


def witness_pairing(kappa: np.ndarray, rho: DensityMatrix, basis: BellBasis) -> tuple[float, float]:
    """Expectation of a Bell-diagonal observable before and after projection.

    K = sum_kl kappa[k,l] P_kl.  Returns (Tr(K rho), Tr(K P(rho))); the two
    coincide because the projection keeps exactly the diagonal entries that
    K couples to.
    """
    _check_dims(rho, basis)
    d = basis.d
    kap = np.asarray(kappa, dtype=float)
    if kap.shape != (d, d):
        raise ValueError(f"kappa must be {d}x{d}, got {kap.shape}")
    K = np.tensordot(kap.ravel(), basis.flat_projectors(), axes=1)
    before = float(np.trace(K @ rho.matrix).real)
    image = assemble_density(pauli_channel(rho, basis), basis)
    after = float(np.trace(K @ image.matrix).real)
    return before, after
