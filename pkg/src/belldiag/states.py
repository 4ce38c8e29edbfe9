"""Bell-diagonal states on the magic simplex and random state generation.

A Bell-diagonal state is a mixture rho = sum_{k,l} c[k,l] P_{k,l} of the d^2
projectors of one Bell basis; the coefficient array c lives on the
(d^2 - 1)-simplex.  Uniform simplex samples are drawn per-state from labelled
substreams so that the identical coefficient set can be replayed across many
basis choices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qmat import DensityMatrix
from .rng import substream
from .weyl import BellBasis, PhaseMatrix

__all__ = [
    "BellDiagonalState",
    "ProductState",
    "sample_simplex",
    "simplex_sample_for_state",
    "assemble_density",
    "family_coefficients",
    "family_state",
    "random_phase_matrix",
    "phase_matrix_for_system",
    "random_product_state",
    "random_separable",
    "haar_state",
]

COEFF_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class BellDiagonalState:
    """Simplex point: coefficients c[k,l] >= 0 summing to 1, tied to a basis."""

    d: int
    c: np.ndarray  # (d, d) real
    basis_ref: str

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        if c.shape != (self.d, self.d):
            raise ValueError(f"coefficients must be {self.d}x{self.d}, got {c.shape}")
        if np.min(c) < -COEFF_TOL:
            raise ValueError(f"negative coefficient {np.min(c):.3e}")
        if abs(c.sum() - 1.0) > 1e-12:
            raise ValueError(f"coefficients sum to {c.sum()!r}, expected 1")
        object.__setattr__(self, "c", np.clip(c, 0.0, None))


@dataclass(frozen=True, eq=False)
class ProductState:
    """Pure product state |psi1> ⊗ |psi2> of two qudits."""

    psi1: np.ndarray
    psi2: np.ndarray

    def density(self) -> DensityMatrix:
        d1, d2 = len(self.psi1), len(self.psi2)
        v = np.kron(self.psi1, self.psi2)
        return DensityMatrix(matrix=np.outer(v, v.conj()), dims=(d1, d2))


def sample_simplex_flat(d: int, rng: np.random.Generator) -> np.ndarray:
    """One uniform draw from the full (d^2-1)-simplex as a (d, d) array.

    d^2 iid standard exponentials normalized by their sum, i.e. a flat
    Dirichlet; exact uniformity at O(d^2) cost.
    """
    x = rng.standard_exponential(d * d)
    return (x / x.sum()).reshape(d, d)


def sample_simplex(d: int, rng: np.random.Generator, enclosure: bool = True) -> np.ndarray:
    """One uniform coefficient draw for the sampling experiments.

    With ``enclosure=True`` (the default, and what all statistics runs use)
    the draw is uniform on the simplex restricted to the enclosure polytope
    max(c) <= 1/d, realized by rejection from the flat Dirichlet.  Every
    state with a positive partial transpose satisfies the restriction, so
    the conditioning only discards a slab of fully NPT territory; the
    acceptance rate is ~0.5 at d=3 and grows with d.  ``enclosure=False``
    gives the unrestricted flat draw.
    """
    if not enclosure:
        return sample_simplex_flat(d, rng)
    cap = 1.0 / d
    for _ in range(100_000):
        c = sample_simplex_flat(d, rng)
        if c.max() <= cap:
            return c
    raise RuntimeError(f"enclosure rejection sampling did not terminate for d={d}")


def simplex_sample_for_state(seed: int, state_id: int, d: int) -> np.ndarray:
    """The coefficient draw for state ``state_id``: independent of any basis.

    Derived from the substream (seed, "c", state_id) so every basis system
    sees the same coefficient set in the same order.
    """
    return sample_simplex(d, substream(seed, "c", state_id))


def assemble_density(state: BellDiagonalState, basis: BellBasis) -> DensityMatrix:
    """Mix the basis projectors with the state's coefficients.

    The result is exactly PSD with eigenvalues equal to the coefficients,
    so no spectral validation is needed here.
    """
    if basis.d != state.d or basis.key != state.basis_ref:
        raise ValueError(
            f"state lives in basis {state.basis_ref!r}, got basis {basis.key!r}"
        )
    D = state.d * state.d
    m = np.tensordot(state.c.ravel(), basis.flat_projectors(), axes=1)
    m = (m + m.conj().T) / 2
    return DensityMatrix(matrix=m.reshape(D, D), dims=(state.d, state.d))


# Experimental slice family through the d=3 simplex: mixing weights of the
# identity, the (0,*) projectors and the (1,*) projectors parameterized by
# two reals (a, b).  q is the weight left for the uniform background.
_FAMILY_LINE_WEIGHT = 1.0 / (3.0 * np.sqrt(3.0))


def family_coefficients(a: float, b: float) -> tuple[np.ndarray, bool]:
    """Coefficient array of the slice family at (a, b) plus a validity flag.

    c[0,0] = q/9 + a/5, c[0,1] = c[0,2] = q/9 + b/8,
    c[1,*] = q/9 + 1/(3*sqrt(3)), c[2,*] = q/9, with
    q = 1 - a/5 - b/4 - 1/sqrt(3).  Valid iff all coefficients are
    nonnegative (within tolerance); always sums to 1.
    """
    q = 1.0 - a / 5.0 - b / 4.0 - 1.0 / np.sqrt(3.0)
    base = q / 9.0
    c = np.full((3, 3), base, dtype=float)
    c[0, 0] += a / 5.0
    c[0, 1] += b / 8.0
    c[0, 2] += b / 8.0
    c[1, :] += _FAMILY_LINE_WEIGHT
    valid = bool(np.min(c) >= -COEFF_TOL)
    if valid:
        c = np.clip(c, 0.0, None)
        c = c / c.sum()
    return c, valid


def family_state(a: float, b: float, basis: BellBasis) -> BellDiagonalState | None:
    """Slice-family state at (a, b) in the given d=3 basis; None if invalid."""
    if basis.d != 3:
        raise ValueError(f"the slice family is defined for d=3, got d={basis.d}")
    c, valid = family_coefficients(a, b)
    if not valid:
        return None
    return BellDiagonalState(d=3, c=c, basis_ref=basis.key)


def random_phase_matrix(
    d: int, rng: np.random.Generator, mode: str = "full", eps: float = 0.0
) -> PhaseMatrix:
    """Random phase matrix: angles iid uniform on [0, 2*pi) ("full") or [0, eps) ("small")."""
    if mode == "full":
        high = 2 * np.pi
    elif mode == "small":
        if eps <= 0:
            raise ValueError(f"small mode needs eps > 0, got {eps}")
        high = eps
    else:
        raise ValueError(f"unknown phase mode {mode!r}")
    return PhaseMatrix.from_angles(rng.uniform(0.0, high, size=(d, d)))


def phase_matrix_for_system(seed: int, system_id: int, d: int, mode: str = "full", eps: float = 0.0) -> PhaseMatrix:
    """Phase matrix for basis system ``system_id`` from the (seed, "alpha", id) substream."""
    return random_phase_matrix(d, substream(seed, "alpha", system_id), mode=mode, eps=eps)


def haar_state(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random pure state of one d-level system."""
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_product_state(d: int, rng: np.random.Generator) -> ProductState:
    """Two independent Haar-random qudit states."""
    return ProductState(psi1=haar_state(d, rng), psi2=haar_state(d, rng))


def random_separable(d: int, terms: int, rng: np.random.Generator) -> DensityMatrix:
    """Separable-by-construction mixture of ``terms`` random pure products."""
    if terms < 1:
        raise ValueError(f"terms must be >= 1, got {terms}")
    if terms == 1:
        q = np.array([1.0])
    else:
        x = rng.standard_exponential(terms)
        q = x / x.sum()
    m = np.zeros((d * d, d * d), dtype=complex)
    for i in range(terms):
        ps = random_product_state(d, rng)
        v = np.kron(ps.psi1, ps.psi2)
        m += q[i] * np.outer(v, v.conj())
    m = (m + m.conj().T) / 2
    return DensityMatrix(matrix=m, dims=(d, d))
