"""Pulse sequences over exchange couplings and the global field, and the
algebraic machinery that compiles encoded gates out of them.

The primitive controls are

* ``EX i j t`` — evolve under the exchange term H_ij for duration t,
* ``GF t``     — evolve under the global field H_0 for duration t,
* ``ZR i j t`` — an *ideal* rotation exp(-i t Zbar_ij) of the pair's logical
  Z; only emitted when a synthesizer is asked to treat single-Z pulses as
  ideal (used to isolate error sources in tests).

A sequence lists pulses in temporal order; the compiled matrix is the product
with the last pulse leftmost (the classic reversal is handled here, once).

Logical (encoded) operators on a block of qubits (i, j):

    Xbar = (X_i X_j + Y_i Y_j) / 2
    Ybar = (Y_i X_j - X_i Y_j) / 2
    Zbar = (Z_i - Z_j) / 2

These act as the Pauli algebra on span{|01>, |10>} and annihilate the leakage
subspace span{|00>, |11>}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .hamiltonians import CouplingGraph, ExchangeModel, GlobalField, build_h0, graph_hamiltonian
from .linalg import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    expm_hermitian,
    kron_all,
    kron_embed,
)

HALF_XY = 0.5 * (kron_all(PAULI_X, PAULI_X) + kron_all(PAULI_Y, PAULI_Y))
HALF_YX = 0.5 * (kron_all(PAULI_Y, PAULI_X) - kron_all(PAULI_X, PAULI_Y))
HALF_ZDIFF = 0.5 * (kron_all(PAULI_Z, np.eye(2)) - kron_all(np.eye(2), PAULI_Z))


def xbar(i: int, j: int, n: int) -> np.ndarray:
    return kron_embed(HALF_XY, (i, j), n)


def ybar(i: int, j: int, n: int) -> np.ndarray:
    return kron_embed(HALF_YX, (i, j), n)


def zbar(i: int, j: int, n: int) -> np.ndarray:
    return kron_embed(HALF_ZDIFF, (i, j), n)


def zzbar(block: int, n: int) -> np.ndarray:
    """Inter-block coupling generator Z_{2i} Z_{2i+1} between blocks i, i+1."""
    return kron_embed(kron_all(PAULI_Z, PAULI_Z), (2 * block, 2 * block + 1), n)


@dataclass(frozen=True)
class LogicalGenerators:
    """su(2) generators of one block plus its physical qubit pair."""

    block: int
    qubits: tuple
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray


def logical_generators(block: int, n: int) -> LogicalGenerators:
    i, j = 2 * block - 1, 2 * block
    return LogicalGenerators(block, (i, j), xbar(i, j, n), ybar(i, j, n), zbar(i, j, n))


def conjugate(I_k: np.ndarray, phi: float, I_i: np.ndarray, theta: float) -> np.ndarray:
    """exp(-i phi I_k) exp(i theta I_i) exp(i phi I_k).

    For su(2) generators with [I_i, I_j] = i I_k (cyclic) this equals
    exp(i theta (I_i cos phi + I_j sin phi)).
    """
    return expm_hermitian(I_k, phi) @ expm_hermitian(I_i, -theta) @ expm_hermitian(I_k, -phi)


# ---------------------------------------------------------------------------
# pulses and sequences
# ---------------------------------------------------------------------------

EXCHANGE = "EX"
GLOBAL_FIELD = "GF"
IDEAL_ZBAR = "ZR"


@dataclass(frozen=True)
class Pulse:
    kind: str
    duration: float
    i: int = 0
    j: int = 0

    def __post_init__(self):
        if self.kind not in (EXCHANGE, GLOBAL_FIELD, IDEAL_ZBAR):
            raise ValueError(f"unknown pulse kind {self.kind!r}")
        if not math.isfinite(self.duration):
            raise ValueError("pulse duration must be finite")
        if self.kind != GLOBAL_FIELD and not (0 < self.i < self.j):
            raise ValueError("two-qubit pulse needs ordered qubit pair")

    def to_line(self) -> str:
        if self.kind == GLOBAL_FIELD:
            return f"GF {self.duration!r}"
        return f"{self.kind} {self.i} {self.j} {self.duration!r}"


def exchange_pulse(i: int, j: int, duration: float) -> Pulse:
    return Pulse(EXCHANGE, duration, min(i, j), max(i, j))


def field_pulse(duration: float) -> Pulse:
    return Pulse(GLOBAL_FIELD, duration)


@dataclass
class PulseSequence:
    """Ordered pulses with their compilation context.

    ``segments`` optionally names contiguous chunks (pulse-count per chunk) of
    the sequence, marking the boundaries between the top-level factors of a
    synthesized gate; fault-propagation sweeps use them to distinguish
    between-factor from mid-factor insertion points.
    """

    model: ExchangeModel
    graph: CouplingGraph
    field: GlobalField
    pulses: list = field(default_factory=list)
    name: str = ""
    segments: list = field(default_factory=list)  # (label, n_pulses)

    def __post_init__(self):
        if self.graph.n_qubits != self.field.n_qubits:
            raise ValueError("graph and field disagree on register size")
        for p in self.pulses:
            self._check(p)

    def _check(self, p: Pulse) -> None:
        if p.kind == EXCHANGE and not self.graph.has_coupling(p.i, p.j):
            raise ValueError(f"pulse uses absent coupling ({p.i}, {p.j})")

    @property
    def n_qubits(self) -> int:
        return self.graph.n_qubits

    @property
    def pulse_count(self) -> int:
        return len(self.pulses)

    def append(self, pulse: Pulse) -> None:
        self._check(pulse)
        self.pulses.append(pulse)

    def extend(self, other: "PulseSequence", label: str | None = None) -> None:
        if other.graph is not self.graph and other.graph.couplings != self.graph.couplings:
            raise ValueError("cannot splice sequences over different graphs")
        for p in other.pulses:
            self.append(p)
        if label is not None:
            self.segments.append((label, len(other.pulses)))

    def pulse_unitary(self, pulse: Pulse) -> np.ndarray:
        n = self.n_qubits
        if pulse.kind == EXCHANGE:
            H = graph_hamiltonian(self.graph, pulse.i, pulse.j)
        elif pulse.kind == GLOBAL_FIELD:
            H = build_h0(self.field)
        else:
            H = zbar(pulse.i, pulse.j, n)
        return expm_hermitian(H, pulse.duration)

    def compile(self) -> np.ndarray:
        """Compiled unitary: pulses act in list order (last pulse leftmost)."""
        U = np.eye(2**self.n_qubits, dtype=complex)
        for pulse in self.pulses:
            U = self.pulse_unitary(pulse) @ U
        return U

    def total_duration(self) -> float:
        """Sum of |duration| over pulses (angle-weighted time proxy)."""
        return float(sum(abs(p.duration) for p in self.pulses))

    def segment_boundaries(self) -> list:
        """Pulse indices at which a named top-level factor starts/ends."""
        bounds = [0]
        for _, count in self.segments:
            bounds.append(bounds[-1] + count)
        return bounds

    def to_text(self) -> str:
        lines = [f"# model={self.model.value} gate={self.name or 'unnamed'} n={self.n_qubits}"]
        lines += [p.to_line() for p in self.pulses]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, graph: CouplingGraph, fld: GlobalField) -> "PulseSequence":
        model = ExchangeModel.XY
        name = ""
        pulses = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                for token in line[1:].split():
                    if token.startswith("model="):
                        model = ExchangeModel(token.split("=", 1)[1])
                    elif token.startswith("gate="):
                        name = token.split("=", 1)[1]
                continue
            parts = line.split()
            if parts[0] == GLOBAL_FIELD:
                pulses.append(field_pulse(float(parts[1])))
            elif parts[0] in (EXCHANGE, IDEAL_ZBAR):
                pulses.append(Pulse(parts[0], float(parts[3]), int(parts[1]), int(parts[2])))
            else:
                raise ValueError(f"unparseable pulse line: {raw!r}")
        return cls(model, graph, fld, pulses, name=name)


def new_sequence(model, graph, fld, name="") -> PulseSequence:
    return PulseSequence(ExchangeModel(model), graph, fld, [], name=name)


# ---------------------------------------------------------------------------
# single-Z generation from the global field
# ---------------------------------------------------------------------------


def make_single_z(
    i: int,
    k: int,
    graph: CouplingGraph,
    fld: GlobalField,
    angle: float,
    model: ExchangeModel = ExchangeModel.XY,
    ideal: bool = False,
) -> PulseSequence:
    """Sequence compiling exactly to exp(-i angle Zbar_ik) = e^{-i angle Z_i/2} e^{+i angle Z_k/2}.

    Built by conjugating a global-field interval with a quarter-swap exchange
    pulse on (i, k): the frequency difference of the two qubits is swapped for
    the interval, leaving a pure differential Z rotation; every other qubit's
    field phase cancels between the two intervals.  At angle = pi the result
    is the Pauli product Z_i Z_k, whose rider on qubit k drops out whenever it
    is used as a conjugator around a pulse not touching k.
    """
    if i == k:
        raise ValueError("single-Z generation needs two distinct qubits")
    seq = new_sequence(model, graph, fld, name=f"single_z_{i}_{k}")
    if ideal:
        a, b = min(i, k), max(i, k)
        seq.append(Pulse(IDEAL_ZBAR, angle if (a, b) == (i, k) else -angle, a, b))
        return seq
    delta_ki = fld.delta(k, i)
    if delta_ki == 0:
        raise ValueError(f"degenerate field frequencies for qubits {i}, {k}")
    c = graph.coupling(i, k)
    if c.J == 0:
        raise ValueError(f"coupling ({i}, {k}) has no transverse part to conjugate with")
    t_field = angle / delta_ki
    t_swap = math.pi / (4 * c.J)
    # matrix order e^{+i t H0} . e^{-i pi/4 H_ik} . e^{-i t H0} . e^{+i pi/4 H_ik}
    seq.append(exchange_pulse(i, k, -t_swap))
    seq.append(field_pulse(t_field))
    seq.append(exchange_pulse(i, k, t_swap))
    seq.append(field_pulse(-t_field))
    return seq


# ---------------------------------------------------------------------------
# recoupling: isolating the transverse or Ising part of a joint coupling
# ---------------------------------------------------------------------------


def _conjugator_partner(i: int, j: int, graph: CouplingGraph, fld: GlobalField) -> int:
    for k in range(1, graph.n_qubits + 1):
        if k in (i, j):
            continue
        if graph.has_coupling(i, k) and fld.delta(k, i) != 0:
            return k
    raise ValueError(f"no partner qubit available to build Z_{i} conjugation pulses")


def recouple(
    i: int,
    j: int,
    graph: CouplingGraph,
    fld: GlobalField,
    model: ExchangeModel,
    t: float,
    sign: str,
    ideal_z: bool = False,
) -> PulseSequence:
    """Two half-pulses of H_ij wrapped in a Z_i conjugation.

    sign "+" compiles to exp(-2 i t J Xbar_ij); sign "-" compiles to
    exp(-i t Jz Z_i Z_j).  The conjugating pi Z_i pulses are expanded through
    make_single_z with a partner qubit k (coupled to i, k not in {i, j});
    the Z_k rider cancels around the half-pulse.  For the XY model the "+"
    branch is unnecessary (Xbar is directly available) and is refused.
    """
    model = ExchangeModel(model)
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    if model is ExchangeModel.XY:
        raise ValueError(
            "recoupling is a no-op for the XY model: Xbar rotations are single "
            "pulses and there is no Ising term to isolate"
        )
    i, j = min(i, j), max(i, j)
    graph.coupling(i, j)
    k = _conjugator_partner(i, j, graph, fld)
    conj = make_single_z(i, k, graph, fld, math.pi, model=model, ideal=ideal_z)
    seq = new_sequence(model, graph, fld, name=f"recouple{sign}_{i}_{j}")
    # matrix order: e^{-i t H/2} . W . e^{-+ i t H/2} . W   (W = Z_i Z_k)
    seq.extend(conj)
    seq.append(exchange_pulse(i, j, t / 2 if sign == "-" else -t / 2))
    seq.extend(conj)
    seq.append(exchange_pulse(i, j, t / 2))
    return seq


# ---------------------------------------------------------------------------
# encoded one- and two-qubit gate synthesis
# ---------------------------------------------------------------------------


def synthesis_context(
    model,
    n_qubits: int,
    J: float = 1.0,
    Jz: float | None = None,
    extra_pairs=(),
):
    """Default coupling graph (range-2 chain) and linear field for synthesis."""
    model = ExchangeModel(model)
    graph = CouplingGraph.for_model(model, n_qubits, J=J, Jz=Jz, extra_pairs=extra_pairs)
    return model, graph, GlobalField.linear(n_qubits)


def _append_xbar_rotation(seq: PulseSequence, i: int, j: int, theta: float, pure: bool = False,
                          ideal_z: bool = False) -> None:
    """Append pulses for exp(-i theta Xbar_ij).

    XY: a single exchange pulse (exact).  Heisenberg/XXZ: either raw half
    pulses (exact on the pair's code subspace, Ising phases remain on the
    leakage sector) or, with pure=True, the recoupled variant that is exact
    on the whole space.
    """
    c = seq.graph.coupling(i, j)
    if seq.model is ExchangeModel.XY or c.Jz == 0:
        seq.append(exchange_pulse(i, j, theta / (2 * c.J)))
    elif pure:
        sub = recouple(i, j, seq.graph, seq.field, seq.model, theta / (2 * c.J), "+",
                       ideal_z=ideal_z)
        seq.extend(sub)
    else:
        seq.append(exchange_pulse(i, j, theta / (2 * c.J)))


def _append_zbar_rotation(seq: PulseSequence, i: int, j: int, theta: float,
                          ideal_z: bool = False) -> None:
    seq.extend(make_single_z(i, j, seq.graph, seq.field, theta, model=seq.model, ideal=ideal_z))


def synth_encoded_hadamard(
    block: int,
    model,
    graph: CouplingGraph | None = None,
    fld: GlobalField | None = None,
    ideal_z: bool = False,
) -> PulseSequence:
    """Encoded Hadamard on one block: three pi/4 rotations X, Z, X of the
    block's logical axes.  Exact (phase included) on the code subspace."""
    model = ExchangeModel(model)
    if graph is None:
        model, graph, fld = synthesis_context(model, 2 * block)
    i, j = 2 * block - 1, 2 * block
    seq = new_sequence(model, graph, fld, name=f"hadamard_b{block}")
    _append_xbar_rotation(seq, i, j, math.pi / 4)
    _append_zbar_rotation(seq, i, j, math.pi / 4, ideal_z=ideal_z)
    _append_xbar_rotation(seq, i, j, math.pi / 4)
    seq.segments = [(f"hadamard_b{block}", seq.pulse_count)]
    return seq


def synth_encoded_cp(
    block_pair,
    model,
    graph: CouplingGraph | None = None,
    fld: GlobalField | None = None,
    ideal_z: bool = False,
) -> PulseSequence:
    """Encoded controlled-phase between adjacent blocks (i, i+1).

    Restricted to the two-block code subspace the compiled unitary equals
    diag(1, 1, 1, -1) in the logical basis up to a global phase.  The XY
    construction conjugates an inter-block exchange pulse with in-block and
    cross-block quarter/half swaps; Heisenberg/XXZ isolates the inter-block
    Ising term with half pulses wrapped in a block-Z conjugation, at total
    Ising angle t Jz = pi/4.  Both end with the differential-Z phase fixups
    on each block.
    """
    bc, bt = block_pair
    if bt != bc + 1:
        raise ValueError("controlled-phase construction requires adjacent blocks")
    model = ExchangeModel(model)
    if graph is None:
        model, graph, fld = synthesis_context(model, 2 * bt)
    q1, q2 = 2 * bc - 1, 2 * bc
    q3, q4 = 2 * bt - 1, 2 * bt
    seq = new_sequence(model, graph, fld, name=f"cp_b{bc}{bt}")
    # phase fixups first in time (they commute with the rest on the code space)
    _append_zbar_rotation(seq, q3, q4, math.pi / 4, ideal_z=ideal_z)
    _append_zbar_rotation(seq, q1, q2, math.pi / 4, ideal_z=ideal_z)
    if model is ExchangeModel.XY:
        cj13 = graph.coupling(q1, q3).J
        cj12 = graph.coupling(q1, q2).J
        cj23 = graph.coupling(q2, q3).J
        # C^{pi/4}_{Xbar13} . C^{pi/2}_{Xbar12} . e^{-i pi/2 Xbar23}
        seq.append(exchange_pulse(q1, q3, -math.pi / (8 * cj13)))
        seq.append(exchange_pulse(q1, q2, -math.pi / (4 * cj12)))
        seq.append(exchange_pulse(q2, q3, math.pi / (4 * cj23)))
        seq.append(exchange_pulse(q1, q2, math.pi / (4 * cj12)))
        seq.append(exchange_pulse(q1, q3, math.pi / (8 * cj13)))
    else:
        c23 = graph.coupling(q2, q3)
        t = math.pi / (4 * c23.Jz)
        conj = make_single_z(q1, q2, graph, fld, math.pi, model=model, ideal=ideal_z)
        # e^{-i t/2 H23} . (Z1 Z2) . e^{-i t/2 H23} . (Z1 Z2)
        seq.extend(conj)
        seq.append(exchange_pulse(q2, q3, t / 2))
        seq.extend(conj)
        seq.append(exchange_pulse(q2, q3, t / 2))
    seq.segments = [(f"cp_b{bc}{bt}", seq.pulse_count)]
    return seq


def synth_encoded_cnot(
    control_block: int,
    target_block: int,
    model,
    graph: CouplingGraph | None = None,
    fld: GlobalField | None = None,
    ideal_z: bool = False,
) -> PulseSequence:
    """Encoded CNOT = (Hadamard on target) (controlled-phase) (Hadamard on target)."""
    if target_block != control_block + 1:
        raise ValueError("construction requires target block adjacent after control")
    model = ExchangeModel(model)
    if graph is None:
        model, graph, fld = synthesis_context(model, 2 * target_block)
    seq = new_sequence(model, graph, fld, name=f"cnot_b{control_block}{target_block}")
    w = synth_encoded_hadamard(target_block, model, graph, fld, ideal_z=ideal_z)
    cp = synth_encoded_cp((control_block, target_block), model, graph, fld, ideal_z=ideal_z)
    seq.extend(w, label="hadamard_target")
    seq.extend(cp, label="controlled_phase")
    seq.extend(w, label="hadamard_target")
    return seq
