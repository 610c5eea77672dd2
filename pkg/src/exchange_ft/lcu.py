"""Leakage-correction unit (LCU).

A leaked data block (population in span{|00>, |11>}) is beyond the reach of
the encoded su(2) generators, which annihilate that subspace.  The LCU is a
unitary L on a data block (qubits 1, 2) plus a freshly prepared ancilla block
(qubits 3, 4, state |0_L> = |01>) that conditionally swaps a leaked data
state into the ancilla:

    L |0_L>|0_L> = |0_L>|0_L>        L |00>|0_L> = |0_L>|00>
    L |1_L>|0_L> = |1_L>|0_L>        L |11>|0_L> = |0_L>|11>

(each row up to phase; see lcu_action_phases for the actual branch phases).
Measuring the ancilla in the block basis then reveals with certainty whether
a leakage correction occurred.  L decomposes as sqrt(SWAP) x sqrt(SWAP)',
two commuting exponentials of cross-block transverse generators, the second
dressed with Z parities so the pair multiplies constructively exactly on the
leaked branches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .encoding import BlockLayout, BlockResult, MeasurementOutcome, measure_block
from .hamiltonians import CouplingGraph, ExchangeModel, GlobalField
from .linalg import PAULI_Z, apply_on_qubits, basis_state, expm_hermitian, kron_all, kron_embed
from .pulses import PulseSequence, exchange_pulse, new_sequence, recouple, xbar

DATA_QUBITS = (1, 2)
ANCILLA_QUBITS = (3, 4)


@dataclass(frozen=True)
class LcuSpec:
    """Register layout of one LCU application: data block then ancilla block.

    The ancilla block must be freshly prepared in |0_L> before every
    application; fresh_register() builds the standard starting state with the
    data block in |0_L> as well (callers overwrite the data part).
    """

    model: ExchangeModel = ExchangeModel.XY
    data_qubits: tuple = DATA_QUBITS
    ancilla_qubits: tuple = ANCILLA_QUBITS

    @property
    def n_qubits(self) -> int:
        return len(self.data_qubits) + len(self.ancilla_qubits)

    def fresh_register(self) -> np.ndarray:
        return np.kron(basis_state(2, "01"), basis_state(2, "01"))

    def context(self):
        """Coupling graph and field for this unit's register."""
        return lcu_graph(self.model)


def build_sqrt_swap(n: int = 4) -> np.ndarray:
    """exp[-i pi/4 (Xbar_13 + Xbar_24)]: parallel square-root swaps of the
    data/ancilla qubit pairs."""
    G = xbar(1, 3, n) + xbar(2, 4, n)
    return expm_hermitian(G, math.pi / 4)


def build_sqrt_swap_prime(n: int = 4) -> np.ndarray:
    """exp[-i pi/4 (Xbar_13 Z_2 Z_4 + Xbar_24 Z_1 Z_3)]: the parity-dressed
    partner; its generator commutes termwise with build_sqrt_swap's."""
    Z24 = kron_embed(kron_all(PAULI_Z, PAULI_Z), (2, 4), n)
    Z13 = kron_embed(kron_all(PAULI_Z, PAULI_Z), (1, 3), n)
    G = xbar(1, 3, n) @ Z24 + xbar(2, 4, n) @ Z13
    return expm_hermitian(G, math.pi / 4)


def build_l_ideal(n: int = 4) -> np.ndarray:
    """The model-independent LCU unitary, as the product of the two
    square-root swaps (order immaterial: the generators commute)."""
    return build_sqrt_swap(n) @ build_sqrt_swap_prime(n)


LCU_ACTION_TABLE = (
    # (input bits, output bits, corrected?)
    ("0101", "0101", False),
    ("1001", "1001", False),
    ("0001", "0100", True),
    ("1101", "0111", True),
)


def lcu_action_phases(L: np.ndarray | None = None):
    """Branch phase and residual of L on each action-table row.

    Returns a list of (input_bits, output_bits, phase, residual) where
    residual is the norm of the output component outside the target ray.
    The canonical build yields phases (1, 1, -i, -i): the swapped branches
    carry a -i relative to the unswapped ones.
    """
    if L is None:
        L = build_l_ideal()
    rows = []
    for bits_in, bits_out, _ in LCU_ACTION_TABLE:
        out = L @ basis_state(4, bits_in)
        target = basis_state(4, bits_out)
        amp = complex(np.vdot(target, out))
        residual = float(np.linalg.norm(out - amp * target))
        rows.append((bits_in, bits_out, amp, residual))
    return rows


# ---------------------------------------------------------------------------
# pulse-level synthesis
# ---------------------------------------------------------------------------


def lcu_graph(model, J: float = 1.0, Jz: float | None = None) -> tuple:
    """Coupling graph and field for the four LCU qubits.

    The Heisenberg/XXZ route needs the (1, 4) coupling, outside the default
    |i-j| <= 2 window; a square arrangement of the four qubits makes that
    pair physically adjacent, so the graph is built with the long-range
    override for those models.
    """
    model = ExchangeModel(model)
    extra = () if model is ExchangeModel.XY else ((1, 4),)
    graph = CouplingGraph.for_model(model, 4, J=J, Jz=Jz, extra_pairs=extra)
    return model, graph, GlobalField.linear(4)


def _xbar_angle_pulse(graph, i, j, theta) -> "object":
    c = graph.coupling(i, j)
    return exchange_pulse(i, j, theta / (2 * c.J))


def synth_sqrt_swap(model, graph=None, fld=None, ideal_z: bool = False) -> PulseSequence:
    """Pulse sequence for sqrt(SWAP): two parallel quarter swaps."""
    if graph is None:
        model, graph, fld = lcu_graph(model)
    model = ExchangeModel(model)
    seq = new_sequence(model, graph, fld, name="sqrt_swap")
    for (i, j) in ((1, 3), (2, 4)):
        if model is ExchangeModel.XY:
            seq.append(_xbar_angle_pulse(graph, i, j, math.pi / 4))
        else:
            seq.extend(recouple(i, j, graph, fld, model,
                                math.pi / (8 * graph.coupling(i, j).J), "+", ideal_z=ideal_z))
    seq.segments = [("sqrt_swap", seq.pulse_count)]
    return seq


def _synth_sqrt_swap_prime_xy(graph, fld) -> PulseSequence:
    """XY route: conjugate sqrt(SWAP) by the two in-block half swaps.

    The half swaps V_12, V_34 twist the cross-block transverse generators
    into their parity-dressed forms, so V sqrt(SWAP) V^dag equals
    sqrt(SWAP)' exactly, using only |i-j| <= 2 couplings (6 pulses).
    """
    seq = new_sequence(ExchangeModel.XY, graph, fld, name="sqrt_swap_prime")
    half = math.pi / 2
    quarter = math.pi / 4
    # matrix order: V34 V12 . sqrt(SWAP) . V12^dag V34^dag
    seq.append(_xbar_angle_pulse(graph, 1, 2, -half))
    seq.append(_xbar_angle_pulse(graph, 3, 4, -half))
    seq.append(_xbar_angle_pulse(graph, 1, 3, quarter))
    seq.append(_xbar_angle_pulse(graph, 2, 4, quarter))
    seq.append(_xbar_angle_pulse(graph, 3, 4, half))
    seq.append(_xbar_angle_pulse(graph, 1, 2, half))
    return seq


def _synth_sqrt_swap_prime_exchange(model, graph, fld, ideal_z) -> PulseSequence:
    """Heisenberg/XXZ route: two conjugated quarter swaps with the Ising
    term refocused.

    Each factor is C^{pi/4}_{Z_a Z_b} . C^{pi/2}_{Xbar_12} applied to a
    cross quarter swap; all transverse rotations are recoupled pure, and the
    Z Z conjugators come from the "-" recoupling branch.
    """

    def xbar_rot(i, j, theta):
        return recouple(i, j, graph, fld, model, theta / (2 * graph.coupling(i, j).J),
                        "+", ideal_z=ideal_z)

    def zz_rot(i, j, theta):
        return recouple(i, j, graph, fld, model, theta / graph.coupling(i, j).Jz,
                        "-", ideal_z=ideal_z)

    seq = new_sequence(model, graph, fld, name="sqrt_swap_prime")

    def conjugated_factor(zz_pair, inner_pair):
        # matrix: e^{-i pi/4 ZZ} e^{-i pi/2 X12} e^{-i pi/4 X_inner} e^{+i pi/2 X12} e^{+i pi/4 ZZ}
        seq.extend(zz_rot(*zz_pair, -math.pi / 4))
        seq.extend(xbar_rot(1, 2, -math.pi / 2))
        seq.extend(xbar_rot(*inner_pair, math.pi / 4))
        seq.extend(xbar_rot(1, 2, math.pi / 2))
        seq.extend(zz_rot(*zz_pair, math.pi / 4))

    conjugated_factor((1, 4), (2, 3))  # equals exp[-i pi/4 Xbar_13 Z2 Z4]
    conjugated_factor((2, 3), (1, 4))  # equals exp[-i pi/4 Xbar_24 Z1 Z3]
    return seq


def synth_sqrt_swap_prime(model, graph=None, fld=None, ideal_z: bool = False) -> PulseSequence:
    model = ExchangeModel(model)
    if graph is None:
        model, graph, fld = lcu_graph(model)
    if model is ExchangeModel.XY:
        seq = _synth_sqrt_swap_prime_xy(graph, fld)
    else:
        seq = _synth_sqrt_swap_prime_exchange(model, graph, fld, ideal_z)
    seq.segments = [("sqrt_swap_prime", seq.pulse_count)]
    return seq


def synth_lcu(model, graph=None, fld=None, ideal_z: bool = False) -> PulseSequence:
    """Full leakage-correction unit as pulses: sqrt(SWAP)' then sqrt(SWAP).

    Compiles to build_l_ideal exactly (global phase 1) for every model; the
    pulse count is reported by the sequence itself.
    """
    model = ExchangeModel(model)
    if graph is None:
        model, graph, fld = lcu_graph(model)
    seq = new_sequence(model, graph, fld, name="lcu")
    seq.extend(synth_sqrt_swap_prime(model, graph, fld, ideal_z=ideal_z), label="sqrt_swap_prime")
    seq.extend(synth_sqrt_swap(model, graph, fld, ideal_z=ideal_z), label="sqrt_swap")
    return seq


# ---------------------------------------------------------------------------
# applying the LCU to a register and classifying the outcome
# ---------------------------------------------------------------------------


@dataclass
class LcuOutcome:
    block: int
    ancilla_result: BlockResult
    corrected: bool
    trial: int = 0


def lcu_round(
    state: np.ndarray,
    block: int,
    layout: BlockLayout,
    rng: np.random.Generator,
    lcu_unitary: np.ndarray | None = None,
    trial: int = 0,
):
    """One LCU application to the given block of a register.

    A fresh two-qubit ancilla in |0_L> is appended, the (possibly faulty)
    4-qubit LCU unitary acts on (block qubits, ancilla), the ancilla block is
    measured and discarded.  Finding the ancilla outside |0_L> means the
    leaked data content was swapped out and the block now sits in |0_L>; that
    is reported as corrected (the swap converts leakage into a logical error
    for the stabilizer layer above).  Returns (outcome, new_state) with the
    register back at its original size.
    """
    if lcu_unitary is None:
        lcu_unitary = build_l_ideal()
    n = layout.n_qubits
    hi, lo = layout.qubits(block)
    # append ancilla |0_L> = |01> as qubits n+1, n+2
    big = np.kron(state, basis_state(2, "01"))
    big = apply_on_qubits(lcu_unitary, (hi, lo, n + 1, n + 2), big)
    big_layout = BlockLayout(layout.n_blocks + 1)
    meas: MeasurementOutcome = measure_block(big, layout.n_blocks + 1, big_layout, rng)
    # ancilla is in a product basis state after collapse: slice it off
    post = meas.post_state.reshape(2**n, 4)
    anc_index = {"00": 0, "0L": 1, "1L": 2, "11": 3}[meas.result.value]
    reduced = post[:, anc_index]
    reduced = reduced / np.linalg.norm(reduced)
    corrected = meas.result.leaked
    return LcuOutcome(block, meas.result, corrected, trial), reduced


# ---------------------------------------------------------------------------
# repetition / boosting protocol
# ---------------------------------------------------------------------------


def required_repetitions(p_c: float, confidence: float) -> int:
    """Smallest n with 1 - (1 - p_c)^n >= confidence.

    p_c is the probability that a conclusive (ancilla in |0_L>) round is also
    correct; repeating until n consecutive no-leakage events boosts the
    conclusive-and-correct probability past the target confidence.
    """
    if not 0.0 <= p_c <= 1.0 or not 0.0 <= confidence <= 1.0:
        raise ValueError("probabilities must lie in [0, 1]")
    if confidence == 0.0:
        return 1
    if p_c == 1.0:
        return 1
    if p_c == 0.0 or confidence == 1.0:
        raise ValueError(f"confidence {confidence} unattainable with p_c={p_c}")
    n = max(1, math.ceil(math.log(1.0 - confidence) / math.log(1.0 - p_c)))
    while 1.0 - (1.0 - p_c) ** n < confidence:  # guard the log against rounding
        n += 1
    while n > 1 and 1.0 - (1.0 - p_c) ** (n - 1) >= confidence:
        n -= 1
    return n


def simulate_boosting(p_c: float, confidence: float, trials: int, seed: int) -> dict:
    """Monte-Carlo check of the repetition protocol with a synthetic p_c.

    Each round is conclusive-and-correct with probability p_c; a trial runs
    until n = required_repetitions(p_c, confidence) consecutive no-leakage
    rounds are collected and succeeds when at least one of those rounds was
    correct.  Returns the empirical success rate and its binomial 3-sigma.
    """
    n = required_repetitions(p_c, confidence)
    rng = np.random.default_rng(seed)
    draws = rng.random((trials, n))
    successes = int(np.sum((draws < p_c).any(axis=1)))
    rate = successes / trials
    sigma = math.sqrt(max(rate * (1 - rate), 1e-12) / trials)
    return {
        "n": n,
        "trials": trials,
        "success_rate": rate,
        "sigma": sigma,
        "target": confidence,
    }
