"""Weyl-Heisenberg Bell bases, Bell-diagonal qudit states and their entanglement structure."""

from .qmat import (
    DensityMatrix,
    kron,
    hermitian_spectrum,
    singular_values,
    partial_transpose,
    realign,
    partial_trace,
)
from .weyl import (
    PhaseMatrix,
    BellBasis,
    weyl_op,
    bell_state,
    bell_seed_state,
    twirl_op,
    gen_weyl_op,
    gen_bell_basis,
    standard_basis,
    basis_gram_defect,
)
from .states import (
    BellDiagonalState,
    ProductState,
    sample_simplex,
    assemble_density,
    family_state,
    family_coefficients,
    random_phase_matrix,
    random_product_state,
    random_separable,
)
from .channels import (
    pauli_channel,
    twirl_channel,
    channel_equiv_defect,
    sep_conservation_check,
    witness_pairing,
)
from .criteria import (
    ClassificationRecord,
    BasisClassifier,
    is_ppt,
    e2_realignment,
    e3_quasipure_generic,
    e3_quasipure_closed,
    classify,
)
from .ecc import (
    ErrorDistribution,
    apply_error_channel,
    fourier_gate,
    controlled_twirl,
    phase_extract,
    decode,
    correct,
    run_demo,
)

__version__ = "0.1.0"
