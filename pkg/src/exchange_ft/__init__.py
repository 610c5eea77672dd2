"""Fault-tolerant quantum computation from exchange interactions alone.

Logical qubits live in the two-dimensional subspace span{|01>, |10>} of
physical qubit pairs; all gates are compiled from controllable exchange
couplings plus a global field, leakage out of the pair subspace is caught by
a unitary leakage-correction unit, and an outer stabilizer layer corrects the
residual logical errors.  Everything is verified by dense matrix computation
at desk scale (registers up to 16 qubits).
"""

from .encoding import (
    BlockLayout,
    BlockResult,
    DecodeFailure,
    MeasurementOutcome,
    code_subspace_basis,
    decode,
    encode,
    measure_block,
    total_leakage_weight,
)
from .hamiltonians import (
    Coupling,
    CouplingGraph,
    ExchangeModel,
    GlobalField,
    build_h0,
    build_hij,
)
from .lcu import (
    LcuSpec,
    build_l_ideal,
    build_sqrt_swap,
    build_sqrt_swap_prime,
    lcu_action_phases,
    lcu_round,
    required_repetitions,
    simulate_boosting,
    synth_lcu,
    synth_sqrt_swap,
    synth_sqrt_swap_prime,
)
from .linalg import (
    MAX_QUBITS,
    TOL,
    Tolerances,
    basis_state,
    equal_up_to_phase,
    expm_hermitian,
    kron_embed,
    restricted_fidelity,
)
from .pulses import (
    Pulse,
    PulseSequence,
    conjugate,
    logical_generators,
    make_single_z,
    recouple,
    synth_encoded_cnot,
    synth_encoded_cp,
    synth_encoded_hadamard,
    synthesis_context,
)
from .simulate import (
    ErrorChannel,
    TrialRecord,
    run_ft_round,
    sweep,
    transversality_check,
    wilson_interval,
)
from .stabilizer import (
    BaseCode,
    HybridCode,
    PauliString,
    PRESETS,
    build_hybrid,
    classify_block_error,
    correct,
    extract_syndrome,
    propagate_fault,
)

__version__ = "0.1.0"
