"""Error identification and correction for a shared maximally entangled pair.

A pair prepared in |Om_00> is hit by an error that maps it to |Om_kl> with
probability p[k,l].  Because every Bell state is a joint eigenvector of the
twirl operators T_{i,j} with eigenvalue w^{jk - il}, an ancilla qudit can
read the phase Phi = (jk - il) mod d without disturbing the pair:

    ancilla |0>  --F-->  uniform  --controlled T^m_{i,j}-->  phases  --F^dag-->  |Phi>

Two probe settings, (i,j) = (0,1) then (1,0), give Phi_1 = k and
Phi_2 = -l, which decodes (k, l) for every dimension; the recovery is
(W_{k,l}^dag ⊗ 1).  The readout is deterministic, so the circuit is simulated
by exact amplitude readout (a sampling mode exists for demonstration).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .qmat import kron, partial_trace
from .states import BellDiagonalState
from .weyl import bell_state, omega, standard_basis, twirl_op, weyl_op

__all__ = [
    "ErrorDistribution",
    "apply_error_channel",
    "fourier_gate",
    "controlled_twirl",
    "phase_extract",
    "decode",
    "correct",
    "run_demo",
    "PROBE_PAIR",
]

# Canonical probe settings: (0,1) reads k, (1,0) reads -l; the resulting
# system is diagonal, hence invertible for every d including composite d.
PROBE_PAIR = ((0, 1), (1, 0))


@dataclass(frozen=True, eq=False)
class ErrorDistribution:
    """Probabilities p[k,l] of the pair being mapped to |Om_kl>."""

    d: int
    p: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        if p.shape != (self.d, self.d):
            raise ValueError(f"p must be {self.d}x{self.d}, got {p.shape}")
        if np.min(p) < -1e-12 or abs(p.sum() - 1.0) > 1e-12:
            raise ValueError("p must be a probability distribution")
        object.__setattr__(self, "p", np.clip(p, 0.0, None))

    @classmethod
    def uniform(cls, d: int) -> "ErrorDistribution":
        return cls(d=d, p=np.full((d, d), 1.0 / (d * d)))

    @classmethod
    def point(cls, d: int, k: int, l: int) -> "ErrorDistribution":
        p = np.zeros((d, d))
        p[k % d, l % d] = 1.0
        return cls(d=d, p=p)


def apply_error_channel(p: ErrorDistribution) -> BellDiagonalState:
    """Channel image of the seed projector: Bell-diagonal with c == p."""
    return BellDiagonalState(d=p.d, c=p.p.copy(), basis_ref=standard_basis(p.d).key)


def fourier_gate(d: int) -> np.ndarray:
    """Discrete Fourier gate F|j> = (1/sqrt(d)) sum_k w^{kj} |k>."""
    w = omega(d)
    j = np.arange(d)
    return (w ** np.outer(j, j)) / np.sqrt(d)


def controlled_twirl(d: int, idx: tuple[int, int]) -> np.ndarray:
    """Controlled twirl on ancilla ⊗ pair: |m>⊗|n> -> |m> ⊗ T_{i,j}^m |n>.

    Because the twirl operators compose as T^m_{i,j} = T_{mi, mj}, each
    control block is itself a twirl operator.
    """
    i, j = int(idx[0]) % d, int(idx[1]) % d
    D = d * d
    out = np.zeros((d * D, d * D), dtype=complex)
    for m in range(d):
        out[m * D : (m + 1) * D, m * D : (m + 1) * D] = twirl_op(d, (m * i % d, m * j % d))
    return out


@lru_cache(maxsize=64)
def _circuit_unitary_cached(d: int, i: int, j: int) -> np.ndarray:
    f = fourier_gate(d)
    eye_pair = np.eye(d * d)
    return kron(f.conj().T, eye_pair) @ controlled_twirl(d, (i, j)) @ kron(f, eye_pair)


def _circuit_unitary(d: int, idx: tuple[int, int]) -> np.ndarray:
    return _circuit_unitary_cached(d, int(idx[0]) % d, int(idx[1]) % d)


def phase_extract(
    pair: np.ndarray, idx: tuple[int, int], rng: np.random.Generator | None = None
) -> tuple[int, np.ndarray]:
    """Extract the twirl phase of a pair state into a fresh |0> ancilla.

    Returns (measured phase Phi, post-measurement pair state).  When the pair
    is a Bell state the ancilla ends exactly in |Phi>, Phi = (jk - il) mod d,
    and the pair is untouched.  If ``rng`` is given the ancilla is sampled
    from its outcome distribution instead of read out deterministically.
    """
    d = int(round(np.sqrt(len(pair))))
    if d * d != len(pair):
        raise ValueError(f"pair vector length {len(pair)} is not a perfect square")
    state = np.zeros(d * d * d, dtype=complex)
    state[: d * d] = pair  # ancilla |0> ⊗ pair
    state = _circuit_unitary(d, idx) @ state
    blocks = state.reshape(d, d * d)
    probs = np.linalg.norm(blocks, axis=1) ** 2
    if rng is None:
        outcome = int(np.argmax(probs))
    else:
        outcome = int(rng.choice(d, p=probs / probs.sum()))
    post = blocks[outcome]
    norm = np.linalg.norm(post)
    if norm < 1e-15:
        raise ValueError(f"ancilla outcome {outcome} has zero amplitude")
    return outcome, post / norm


def decode(phi1: int, phi2: int, d: int) -> tuple[int, int]:
    """Invert the canonical probe pair: k from Phi_1 = k, l from Phi_2 = -l."""
    return phi1 % d, (-phi2) % d


def correct(pair: np.ndarray, idx: tuple[int, int]) -> np.ndarray:
    """Apply the recovery (W_{k,l}^dag ⊗ 1) to the pair."""
    d = int(round(np.sqrt(len(pair))))
    return kron(weyl_op(d, idx).conj().T, np.eye(d)) @ pair


def ancilla_readout_distance(pair: np.ndarray, idx: tuple[int, int]) -> float:
    """Max-abs distance of the pre-measurement ancilla state from |Phi><Phi|.

    Diagnostic for the determinism of the readout: exactly 0 for Bell input.
    """
    d = int(round(np.sqrt(len(pair))))
    state = np.zeros(d * d * d, dtype=complex)
    state[: d * d] = pair
    state = _circuit_unitary(d, idx) @ state
    full = np.outer(state, state.conj())
    anc = partial_trace(full, 1, (d, d * d))
    blocks = state.reshape(d, d * d)
    outcome = int(np.argmax(np.linalg.norm(blocks, axis=1)))
    target = np.zeros((d, d), dtype=complex)
    target[outcome, outcome] = 1.0
    return float(np.max(np.abs(anc - target)))


def run_demo(
    d: int, p: ErrorDistribution, rounds: int, rng: np.random.Generator
) -> dict:
    """Sample errors from p, identify them with two probes, correct, score.

    Each round: draw (k,l) ~ p, prepare |Om_kl>, run the two canonical
    probes, decode, apply the recovery, and count exact state recovery
    (fidelity with |Om_00| of 1 up to round-off).
    """
    if rounds < 1:
        raise ValueError(f"rounds must be >= 1, got {rounds}")
    if p.d != d:
        raise ValueError(f"distribution dimension {p.d} != {d}")
    target = bell_state(d, (0, 0))
    flat_p = p.p.ravel()
    successes = 0
    for _ in range(rounds):
        drawn = int(rng.choice(d * d, p=flat_p))
        k, l = drawn // d, drawn % d
        pair = bell_state(d, (k, l))
        phi1, pair = phase_extract(pair, PROBE_PAIR[0])
        phi2, pair = phase_extract(pair, PROBE_PAIR[1])
        k_hat, l_hat = decode(phi1, phi2, d)
        recovered = correct(pair, (k_hat, l_hat))
        fidelity = abs(np.vdot(target, recovered)) ** 2
        if (k_hat, l_hat) == (k, l) and fidelity > 1.0 - 1e-12:
            successes += 1
    return {"d": d, "trials": rounds, "success_rate": successes / rounds}
