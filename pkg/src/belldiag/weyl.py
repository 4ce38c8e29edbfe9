"""Weyl-Heisenberg operators, Bell bases and twirl operators for qudit pairs.

Conventions (w := exp(2*pi*i/d), all index arithmetic mod d):

    W_{k,l}   = sum_j w^{j k} |j><j+l|               (phase index k, shift l)
    |Om_00>   = (1/sqrt(d)) sum_i |ii>
    |Om_kl>   = (W_{k,l} ⊗ 1) |Om_00>
    T_{i,j}   = W_{i,j} ⊗ conj(W_{i,j})              (twirl operators)

The phase-generalized family replaces each Weyl operator by

    V^a_{k,l} = sum_j w^{j k} a[j+l, l] |j><j+l|

for a d x d unimodular matrix a of phases, and |Phi^a_kl> = (V^a_kl ⊗ 1)|Om_00>.
All-ones a recovers the standard construction.  Every unimodular a yields an
orthonormal, locally maximally mixed basis, but the group structure of the
standard operators is generically lost.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .qmat import kron, partial_trace

__all__ = [
    "PhaseMatrix",
    "BellBasis",
    "omega",
    "weyl_op",
    "bell_seed_state",
    "bell_state",
    "twirl_op",
    "gen_weyl_op",
    "gen_bell_basis",
    "standard_basis",
    "basis_gram_defect",
    "basis_local_mix_defect",
]

UNIMODULAR_TOL = 1e-12


def omega(d: int) -> complex:
    """Primitive d-th root of unity exp(2*pi*i/d)."""
    return complex(np.exp(2j * np.pi / d))


@dataclass(frozen=True, eq=False)
class PhaseMatrix:
    """d x d matrix of unimodular phase factors parameterizing a Bell basis."""

    d: int
    alpha: np.ndarray  # complex, |alpha[s, t]| == 1

    @classmethod
    def from_angles(cls, angles: np.ndarray) -> "PhaseMatrix":
        """Build from a d x d array of angles (radians): alpha = exp(i*angle)."""
        ang = np.asarray(angles, dtype=float)
        if ang.ndim != 2 or ang.shape[0] != ang.shape[1]:
            raise ValueError(f"angles must be a square matrix, got shape {ang.shape}")
        return cls(d=ang.shape[0], alpha=np.exp(1j * ang))

    @classmethod
    def ones(cls, d: int) -> "PhaseMatrix":
        """All-ones phases: reproduces the standard Weyl construction."""
        return cls(d=d, alpha=np.ones((d, d), dtype=complex))

    def __post_init__(self):
        a = np.asarray(self.alpha, dtype=complex)
        if self.d < 2:
            raise ValueError(f"dimension must be >= 2, got {self.d}")
        if a.shape != (self.d, self.d):
            raise ValueError(f"alpha must be {self.d}x{self.d}, got {a.shape}")
        mod = np.abs(np.abs(a) - 1.0)
        if np.max(mod) > UNIMODULAR_TOL:
            s, t = np.unravel_index(int(np.argmax(mod)), a.shape)
            raise ValueError(
                f"alpha[{s},{t}] = {a[s, t]!r} is not unimodular (| |a|-1 | = {mod[s, t]:.3e})"
            )
        object.__setattr__(self, "alpha", a)

    def angles(self) -> np.ndarray:
        """Angles in [0, 2*pi) recovering alpha = exp(i*angle)."""
        return np.mod(np.angle(self.alpha), 2 * np.pi)


def weyl_op(d: int, idx: tuple[int, int]) -> np.ndarray:
    """Weyl operator W_{k,l} = sum_j w^{jk} |j><j+l| (d x d unitary)."""
    k, l = int(idx[0]) % d, int(idx[1]) % d
    w = omega(d)
    m = np.zeros((d, d), dtype=complex)
    for j in range(d):
        m[j, (j + l) % d] = w ** (j * k)
    return m


def bell_seed_state(d: int) -> np.ndarray:
    """Maximally entangled seed |Om_00> = (1/sqrt(d)) sum_i |ii>."""
    v = np.zeros(d * d, dtype=complex)
    v[np.arange(d) * d + np.arange(d)] = 1.0 / np.sqrt(d)
    return v


def bell_state(d: int, idx: tuple[int, int]) -> np.ndarray:
    """Standard Bell state |Om_kl> = (W_{k,l} ⊗ 1)|Om_00>."""
    return kron(weyl_op(d, idx), np.eye(d)) @ bell_seed_state(d)


def twirl_op(d: int, idx: tuple[int, int]) -> np.ndarray:
    """Twirl operator T_{i,j} = W_{i,j} ⊗ conj(W_{i,j}) on the pair space."""
    w = weyl_op(d, idx)
    return kron(w, w.conj())


def gen_weyl_op(alpha: PhaseMatrix, idx: tuple[int, int]) -> np.ndarray:
    """Phase-generalized Weyl operator V^a_{k,l} = sum_j w^{jk} a[j+l,l] |j><j+l|."""
    d = alpha.d
    k, l = int(idx[0]) % d, int(idx[1]) % d
    w = omega(d)
    m = np.zeros((d, d), dtype=complex)
    for j in range(d):
        m[j, (j + l) % d] = (w ** (j * k)) * alpha.alpha[(j + l) % d, l]
    return m


@dataclass(frozen=True, eq=False)
class BellBasis:
    """A complete orthonormal basis of d^2 maximally entangled pair states.

    ``states[k, l]`` is the d^2 state vector, ``projectors[k, l]`` the matching
    rank-1 projector.  ``alpha`` is None for the standard construction.
    The basis is immutable; build once, share freely.
    """

    d: int
    kind: str  # "standard" | "generalized"
    alpha: PhaseMatrix | None
    states: np.ndarray = field(repr=False)  # (d, d, d^2)
    projectors: np.ndarray = field(repr=False)  # (d, d, d^2, d^2)

    @cached_property
    def pair_unitaries(self) -> np.ndarray:
        """(d^2, d^2, d^2) stack of V_ij ⊗ conj(V_ij), flat (i, j) order."""
        d = self.d
        out = np.zeros((d * d, d * d, d * d), dtype=complex)
        for i in range(d):
            for j in range(d):
                v = weyl_op(d, (i, j)) if self.alpha is None else gen_weyl_op(self.alpha, (i, j))
                out[i * d + j] = kron(v, v.conj())
        return out

    @property
    def key(self) -> str:
        """Stable identifier used to match states to the basis they live in."""
        if self.kind == "standard":
            return f"standard:d={self.d}"
        digest = hashlib.sha256(np.ascontiguousarray(self.alpha.alpha).tobytes()).hexdigest()[:16]
        return f"generalized:d={self.d}:{digest}"

    def state(self, idx: tuple[int, int]) -> np.ndarray:
        k, l = int(idx[0]) % self.d, int(idx[1]) % self.d
        return self.states[k, l]

    def projector(self, idx: tuple[int, int]) -> np.ndarray:
        k, l = int(idx[0]) % self.d, int(idx[1]) % self.d
        return self.projectors[k, l]

    def state_matrix(self) -> np.ndarray:
        """(d^2, d^2) matrix whose column k*d+l is the state |Phi_kl>."""
        return self.states.reshape(self.d * self.d, self.d * self.d).T

    def flat_projectors(self) -> np.ndarray:
        """(d^2, d^2, d^2) stack of projectors in flat k*d+l order."""
        D = self.d * self.d
        return self.projectors.reshape(D, D, D)


def _build_basis(d: int, kind: str, alpha: PhaseMatrix | None) -> BellBasis:
    D = d * d
    states = np.zeros((d, d, D), dtype=complex)
    projectors = np.zeros((d, d, D, D), dtype=complex)
    seed = bell_seed_state(d)
    eye = np.eye(d)
    for k in range(d):
        for l in range(d):
            op = weyl_op(d, (k, l)) if alpha is None else gen_weyl_op(alpha, (k, l))
            v = kron(op, eye) @ seed
            states[k, l] = v
            projectors[k, l] = np.outer(v, v.conj())
    return BellBasis(d=d, kind=kind, alpha=alpha, states=states, projectors=projectors)


def standard_basis(d: int) -> BellBasis:
    """The standard Weyl-constructed Bell basis in dimension d."""
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    return _build_basis(d, "standard", None)


def gen_bell_basis(alpha: PhaseMatrix) -> BellBasis:
    """Bell basis generated by a unimodular phase matrix.

    Orthonormality and local maximal mixedness hold for every unimodular
    alpha; both are cheap consequences of sum_s a_s conj(a_s) = d.
    """
    return _build_basis(alpha.d, "generalized", alpha)


def basis_gram_defect(basis: BellBasis) -> float:
    """Max deviation of the basis Gram matrix from the identity."""
    m = basis.state_matrix()
    gram = m.conj().T @ m
    return float(np.max(np.abs(gram - np.eye(m.shape[0]))))


def basis_local_mix_defect(basis: BellBasis) -> float:
    """Max deviation of any reduced projector from the maximally mixed state."""
    d = basis.d
    target = np.eye(d) / d
    worst = 0.0
    for k in range(d):
        for l in range(d):
            p = basis.projectors[k, l]
            for keep in (1, 2):
                red = partial_trace(p, keep, (d, d))
                worst = max(worst, float(np.max(np.abs(red - target))))
    return worst
