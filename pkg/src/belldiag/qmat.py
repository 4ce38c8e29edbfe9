"""Dense complex linear-algebra kernel for bipartite qudit states.

Index convention, fixed package-wide: the product basis vector |i> ⊗ |k> of a
(d1, d2) bipartite space sits at flat index i*d2 + k.  The structural maps
below (partial transpose, realignment, partial trace) are plain index
reshuffles in that convention:

    partial transpose   (|i><j| ⊗ |k><l|)^G  ->  |i><j| ⊗ |l><k|
    realignment         (|i><j| ⊗ |k><l|)_R  ->  |i><k| ⊗ |j><l|

All functions are pure; arrays are never modified in place.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "DensityMatrix",
    "kron",
    "hermitian_spectrum",
    "singular_values",
    "partial_transpose",
    "realign",
    "partial_trace",
    "hermiticity_defect",
]

# Hermiticity defects below this are symmetrized away; above, rejected.
HERM_TOL = 1e-10
# Eigenvalues above this (negative) threshold count as non-negative.
NEG_EIG_TOL = -1e-9


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A bipartite density matrix together with its subsystem dimensions.

    ``matrix`` is a (d1*d2, d1*d2) complex array; ``dims = (d1, d2)``.
    Construction via :meth:`make` validates Hermiticity, unit trace and
    approximate positivity; hot paths that assemble states from known-valid
    mixtures may construct directly.
    """

    matrix: np.ndarray
    dims: tuple[int, int]

    @classmethod
    def make(cls, matrix: np.ndarray, dims: tuple[int, int]) -> "DensityMatrix":
        m = np.asarray(matrix, dtype=complex)
        d1, d2 = int(dims[0]), int(dims[1])
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {m.shape}")
        if d1 * d2 != m.shape[0]:
            raise ValueError(f"subsystem dims {d1}x{d2} do not match size {m.shape[0]}")
        if not np.all(np.isfinite(m)):
            raise ValueError("density matrix contains non-finite entries")
        defect = hermiticity_defect(m)
        if defect > 1e-12:
            raise ValueError(f"density matrix not Hermitian (defect {defect:.3e})")
        tr = np.trace(m).real
        if abs(tr - 1.0) > 1e-12:
            raise ValueError(f"density matrix trace {tr!r} != 1")
        w = np.linalg.eigvalsh((m + m.conj().T) / 2)
        if w[0] < NEG_EIG_TOL:
            raise ValueError(f"density matrix has negative eigenvalue {w[0]:.3e}")
        return cls(matrix=m, dims=(d1, d2))


def _as_matrix_and_dims(rho, dims=None) -> tuple[np.ndarray, tuple[int, int]]:
    """Accept a DensityMatrix or a bare array plus explicit dims."""
    if isinstance(rho, DensityMatrix):
        return rho.matrix, rho.dims
    m = np.asarray(rho, dtype=complex)
    if dims is None:
        d = int(round(np.sqrt(m.shape[0])))
        if d * d != m.shape[0]:
            raise ValueError("cannot infer subsystem dims for non-square split; pass dims")
        dims = (d, d)
    return m, (int(dims[0]), int(dims[1]))


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product, |i><j| ⊗ |k><l| at row i*d2+k, column j*d2+l."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def hermiticity_defect(m: np.ndarray) -> float:
    """Max-abs deviation of m from its own adjoint."""
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def hermitian_spectrum(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues ascending, eigenvectors as columns).  Inputs with a
    Hermiticity defect up to HERM_TOL are symmetrized before the solve;
    larger defects are rejected.
    """
    m = np.asarray(m, dtype=complex)
    defect = hermiticity_defect(m)
    if defect > HERM_TOL:
        raise ValueError(f"matrix is not Hermitian: defect {defect:.3e} exceeds {HERM_TOL:.0e}")
    w, v = np.linalg.eigh((m + m.conj().T) / 2)
    return w, v


def singular_values(m: np.ndarray) -> np.ndarray:
    """Singular values in descending order (non-negative)."""
    return np.linalg.svd(np.asarray(m, dtype=complex), compute_uv=False)


def partial_transpose(rho, dims: tuple[int, int] | None = None) -> np.ndarray:
    """Partial transpose on the second subsystem.

    Involutive and trace preserving; output is Hermitian for Hermitian input.
    """
    m, (d1, d2) = _as_matrix_and_dims(rho, dims)
    t = m.reshape(d1, d2, d1, d2)  # axes (i, k, j, l)
    return np.ascontiguousarray(t.transpose(0, 3, 2, 1).reshape(d1 * d2, d1 * d2))


def realign(rho, dims: tuple[int, int] | None = None) -> np.ndarray:
    """Realignment map: row (i,j), column (k,l) entry is rho[(i,k),(j,l)].

    For dims (d1, d2) the result is d1^2 x d2^2; for equal dims it is an
    involution.  The trace norm (singular-value sum) of the output exceeding
    1 certifies entanglement.
    """
    m, (d1, d2) = _as_matrix_and_dims(rho, dims)
    t = m.reshape(d1, d2, d1, d2)  # axes (i, k, j, l)
    return np.ascontiguousarray(t.transpose(0, 2, 1, 3).reshape(d1 * d1, d2 * d2))


def partial_trace(rho, keep: int, dims: tuple[int, int] | None = None) -> np.ndarray:
    """Trace out one subsystem, keeping subsystem 1 or 2 (1-based)."""
    m, (d1, d2) = _as_matrix_and_dims(rho, dims)
    t = m.reshape(d1, d2, d1, d2)
    if keep == 1:
        return np.ascontiguousarray(np.einsum("ikjk->ij", t))
    if keep == 2:
        return np.ascontiguousarray(np.einsum("ikil->kl", t))
    raise ValueError(f"keep must be 1 or 2, got {keep!r}")
