import math

import numpy as np
import pytest

from exchange_ft.encoding import BlockLayout, code_subspace_basis
from exchange_ft.hamiltonians import CouplingGraph, ExchangeModel, GlobalField
from exchange_ft.linalg import (
    basis_state,
    expm_hermitian,
    kron_embed,
    lift_logical,
    pauli_matrix,
    restricted_fidelity,
)
from exchange_ft.pulses import (
    PulseSequence,
    conjugate,
    logical_generators,
    make_single_z,
    recouple,
    synth_encoded_cnot,
    synth_encoded_cp,
    synth_encoded_hadamard,
    synthesis_context,
    xbar,
    zbar,
)
from exchange_ft.stabilizer import operator_support

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
CP = np.diag([1, 1, 1, -1]).astype(complex)
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
MODELS = ("xy", "xxz", "heisenberg")


# ---------------------------------------------------------------------- conjugation


def test_conjugate_with_zero_angle_is_identity_wrap():
    Ix = pauli_matrix("X") / 2
    Iz = pauli_matrix("Z") / 2
    theta = 1.3
    assert np.allclose(conjugate(Iz, 0.0, Ix, theta), expm_hermitian(Ix, -theta))


def test_conjugate_quarter_turn_moves_x_to_y():
    Ix, Iy, Iz = (pauli_matrix(c) / 2 for c in "XYZ")
    got = conjugate(Iz, math.pi / 2, Ix, math.pi)
    want = expm_hermitian(Iy, -math.pi)  # = e^{i pi Y/2}
    assert np.max(np.abs(got - want)) < 1e-12


def test_conjugate_property_on_block_generators():
    rng = np.random.default_rng(8)
    gen = logical_generators(1, 4)
    Ix, Iy, Iz = gen.x / 2, gen.y / 2, gen.z / 2
    for _ in range(25):
        theta, phi = rng.uniform(-2 * math.pi, 2 * math.pi, size=2)
        lhs = conjugate(Iz, phi, Ix, theta)
        rhs = expm_hermitian(Ix * math.cos(phi) + Iy * math.sin(phi), -theta)
        assert np.max(np.abs(lhs - rhs)) < 1e-10


def test_block_generators_close_su2_on_code_subspace():
    gen = logical_generators(1, 2)
    B = code_subspace_basis(BlockLayout(1))
    x, y, z = (B.conj().T @ m @ B for m in (gen.x, gen.y, gen.z))
    assert np.allclose(x @ y - y @ x, 2j * z)
    assert np.allclose(y @ z - z @ y, 2j * x)
    assert np.allclose(z @ x - x @ z, 2j * y)


# ---------------------------------------------------------------------- single-Z


def test_single_z_zero_angle_is_identity():
    model, graph, fld = synthesis_context("heisenberg", 2)
    seq = make_single_z(1, 2, graph, fld, 0.0, model=model)
    assert np.allclose(seq.compile(), np.eye(4))


def test_single_z_matches_differential_rotation():
    rng = np.random.default_rng(3)
    model, graph, fld = synthesis_context("xxz", 3)
    for _ in range(5):
        theta = rng.uniform(-math.pi, math.pi)
        got = make_single_z(1, 3, graph, fld, theta, model=model).compile()
        assert np.max(np.abs(got - expm_hermitian(zbar(1, 3, 3), theta))) < 1e-10


def test_single_z_pi_case_with_descending_field():
    # field (2, 1): driving qubit 2 against partner 1 realizes the pair of
    # half rotations e^{+i pi Z_1/2} e^{-i pi Z_2/2} = Z_2 Z_1 exactly
    graph = CouplingGraph.for_model(ExchangeModel.HEISENBERG, 2)
    fld = GlobalField((2.0, 1.0))
    got = make_single_z(2, 1, graph, fld, math.pi, model=ExchangeModel.HEISENBERG).compile()
    want = expm_hermitian(kron_embed(pauli_matrix("Z"), (2,), 2), math.pi / 2)
    want = want @ expm_hermitian(kron_embed(pauli_matrix("Z"), (1,), 2), -math.pi / 2)
    assert np.max(np.abs(got - want)) < 1e-12
    assert np.max(np.abs(got - pauli_matrix("ZZ"))) < 1e-12


def test_single_z_rejects_unusable_pairs():
    # degenerate frequencies are already unconstructible (GlobalField checks);
    # the reachable failures are a self-pair and a coupling with no
    # transverse part to conjugate with
    graph = CouplingGraph.for_model(ExchangeModel.XY, 2)
    with pytest.raises(ValueError):
        make_single_z(1, 1, graph, GlobalField((1.0, 2.0)), math.pi)
    dead = CouplingGraph(2)
    dead.add(1, 2, 0.0, 0.0)
    with pytest.raises(ValueError):
        make_single_z(1, 2, dead, GlobalField((1.0, 2.0)), math.pi)


# ---------------------------------------------------------------------- recoupling


@pytest.mark.parametrize("model_name", ["xxz", "heisenberg"])
def test_recoupling_both_signs(model_name):
    rng = np.random.default_rng(21)
    model = ExchangeModel(model_name)
    n = 3
    fld = GlobalField.linear(n)
    for _ in range(6):
        J = float(rng.uniform(0.4, 1.8))
        Jz = J if model is ExchangeModel.HEISENBERG else J + float(rng.uniform(0.2, 1.0))
        t = float(rng.uniform(-2, 2))
        graph = CouplingGraph.for_model(model, n, J=J, Jz=Jz)
        plus = recouple(1, 2, graph, fld, model, t, "+").compile()
        minus = recouple(1, 2, graph, fld, model, t, "-").compile()
        assert np.max(np.abs(plus - expm_hermitian(xbar(1, 2, n), 2 * t * J))) < 1e-10
        zz = kron_embed(pauli_matrix("ZZ"), (1, 2), n)
        assert np.max(np.abs(minus - expm_hermitian(zz, t * Jz))) < 1e-10


def test_recoupling_zero_time_is_identity():
    model, graph, fld = synthesis_context("heisenberg", 3)
    assert np.allclose(recouple(1, 2, graph, fld, model, 0.0, "-").compile(), np.eye(8))


def test_recoupling_quarter_ising_angle():
    model, graph, fld = synthesis_context("heisenberg", 3)
    t = math.pi / 4  # t Jz = pi/4 at Jz = 1
    got = recouple(1, 2, graph, fld, model, t, "-").compile()
    zz = kron_embed(pauli_matrix("ZZ"), (1, 2), 3)
    assert np.max(np.abs(got - expm_hermitian(zz, math.pi / 4))) < 1e-10


def test_recoupling_refused_for_xy():
    model, graph, fld = synthesis_context("xy", 3)
    with pytest.raises(ValueError):
        recouple(1, 2, graph, fld, model, 1.0, "+")


def test_recoupling_expanded_equals_ideal_z():
    model, graph, fld = synthesis_context("xxz", 3)
    full = recouple(1, 2, graph, fld, model, 0.7, "+").compile()
    ideal = recouple(1, 2, graph, fld, model, 0.7, "+", ideal_z=True).compile()
    assert np.max(np.abs(full - ideal)) < 1e-10


# ---------------------------------------------------------------------- encoded gates


@pytest.mark.parametrize("model", MODELS)
def test_hadamard_action_on_codewords(model):
    seq = synth_encoded_hadamard(1, model)
    U = seq.compile()
    layout = BlockLayout(1)
    zero_l, one_l = basis_state(2, "01"), basis_state(2, "10")
    out = U @ zero_l
    target = (zero_l + one_l) / math.sqrt(2)
    assert abs(abs(np.vdot(target, out)) - 1.0) < 1e-10
    B = code_subspace_basis(layout)
    assert abs(restricted_fidelity(U @ U, np.eye(4), B) - 1.0) < 1e-10


def test_hadamard_xy_full_matrix():
    # the XY compilation equals -i H on the code sector and the identity on
    # the leakage sector (the scalar prefactor of the abstract gate is not a
    # physical pulse)
    U = synth_encoded_hadamard(1, "xy").compile()
    expected = np.eye(4, dtype=complex)
    idx = [0b01, 0b10]
    for a, ia in enumerate(idx):
        for b, ib in enumerate(idx):
            expected[ia, ib] = -1j * HADAMARD[a, b]
    assert np.max(np.abs(U - expected)) < 1e-12


@pytest.mark.parametrize("model", MODELS)
def test_cp_logical_action(model):
    seq = synth_encoded_cp((1, 2), model)
    U = seq.compile()
    layout = BlockLayout(2)
    B = code_subspace_basis(layout)
    f = restricted_fidelity(U, lift_logical(CP, B), B)
    assert abs(f - 1.0) < 1e-10
    # |00>_L unchanged, |11>_L flipped, relative to each other
    rest = B.conj().T @ U @ B
    assert abs(rest[3, 3] / rest[0, 0] + 1.0) < 1e-10


@pytest.mark.parametrize("model", MODELS)
def test_cnot_truth_table(model):
    seq = synth_encoded_cnot(1, 2, model)
    U = seq.compile()
    layout = BlockLayout(2)
    B = code_subspace_basis(layout)
    assert abs(restricted_fidelity(U, lift_logical(CNOT, B), B) - 1.0) < 1e-10
    assert abs(restricted_fidelity(U @ U, np.eye(16), B) - 1.0) < 1e-10
    rest = B.conj().T @ U @ B
    # control 1 flips target: |10>_L -> |11>_L up to the sequence's phase
    assert abs(abs(rest[3, 2]) - 1.0) < 1e-10
    assert abs(abs(rest[0, 0]) - 1.0) < 1e-10


def test_pulse_counts_are_deterministic():
    counts = {}
    for model in MODELS:
        counts[model] = (
            synth_encoded_hadamard(1, model).pulse_count,
            synth_encoded_cp((1, 2), model).pulse_count,
            synth_encoded_cnot(1, 2, model).pulse_count,
        )
        again = (
            synth_encoded_hadamard(1, model).pulse_count,
            synth_encoded_cp((1, 2), model).pulse_count,
            synth_encoded_cnot(1, 2, model).pulse_count,
        )
        assert counts[model] == again
    assert counts["xy"] == (6, 13, 25)
    assert counts["xxz"] == counts["heisenberg"] == (6, 18, 30)


def test_sequences_use_only_model_pulses():
    # XY graphs carry no Ising part; Heisenberg graphs never split J from Jz
    for model, gate in (("xy", synth_encoded_cnot), ("heisenberg", synth_encoded_cnot)):
        seq = gate(1, 2, model)
        for pulse in seq.pulses:
            assert pulse.kind in ("EX", "GF")
            if pulse.kind == "EX":
                c = seq.graph.coupling(pulse.i, pulse.j)
                if model == "xy":
                    assert c.Jz == 0.0
                else:
                    assert c.J == c.Jz


def test_spectator_blocks_untouched():
    # compile the two-block gate on a six-qubit register: qubits 5, 6 idle
    model, graph, fld = synthesis_context("heisenberg", 6)
    seq = synth_encoded_cnot(1, 2, model, graph, fld)
    U = seq.compile()
    assert set(operator_support(U, tol=1e-9)).issubset({1, 2, 3, 4})


def test_ideal_z_flag_preserves_gate_action():
    layout = BlockLayout(2)
    B = code_subspace_basis(layout)
    for model in MODELS:
        U = synth_encoded_cp((1, 2), model, ideal_z=True).compile()
        assert abs(restricted_fidelity(U, lift_logical(CP, B), B) - 1.0) < 1e-10


# ---------------------------------------------------------------------- serialization


def test_sequence_text_roundtrip():
    model, graph, fld = synthesis_context("xy", 4)
    seq = synth_encoded_cp((1, 2), model, graph, fld)
    text = seq.to_text()
    assert text.startswith("# model=xy gate=cp_b12 n=4")
    assert any(line.startswith("EX ") for line in text.splitlines())
    assert any(line.startswith("GF ") for line in text.splitlines())
    back = PulseSequence.from_text(text, graph, fld)
    assert back.pulse_count == seq.pulse_count
    assert np.max(np.abs(back.compile() - seq.compile())) < 1e-12


def test_sequence_rejects_missing_coupling():
    model, graph, fld = synthesis_context("xy", 2)
    seq = synth_encoded_hadamard(1, model, graph, fld)
    from exchange_ft.pulses import exchange_pulse

    with pytest.raises(ValueError):
        seq.append(exchange_pulse(1, 4, 0.5))
