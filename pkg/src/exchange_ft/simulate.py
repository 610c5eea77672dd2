"""Seeded Monte-Carlo fault simulation of full error-correction rounds.

A round is: run the gate's pulses with per-location Pauli fault sampling,
apply the leakage-correction unit to every block (policy permitting), then
measure the stabilizer syndrome and apply the recovery.  Verdicts compare the
final state against the ideal outcome up to a global phase.

Reproducibility: one master seed; each trial derives independent fault and
measurement streams from (master, trial, purpose) so runs are bit-identical
regardless of execution order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .encoding import BlockLayout
from .hamiltonians import ExchangeModel
from .lcu import build_l_ideal, lcu_round
from .linalg import apply_on_qubits, basis_state, pauli_matrix, state_fidelity
from .stabilizer import (
    HybridCode,
    LeakagePrecondition,
    PauliString,
    correct,
    extract_syndrome,
    operator_support,
)

CLEAN_FIDELITY = 1.0 - 1e-9


@dataclass(frozen=True)
class ErrorChannel:
    """Independent single-qubit Pauli channel applied at each fault location."""

    p_x: float = 0.0
    p_y: float = 0.0
    p_z: float = 0.0

    def __post_init__(self):
        total = self.p_x + self.p_y + self.p_z
        if min(self.p_x, self.p_y, self.p_z) < 0 or total > 1.0:
            raise ValueError("channel probabilities must be nonnegative with sum <= 1")

    @property
    def total(self) -> float:
        return self.p_x + self.p_y + self.p_z

    def sample(self, rng: np.random.Generator) -> str | None:
        r = rng.random()
        if r < self.p_x:
            return "X"
        if r < self.p_x + self.p_y:
            return "Y"
        if r < self.total:
            return "Z"
        return None

    @classmethod
    def bit_flip(cls, p: float) -> "ErrorChannel":
        return cls(p_x=p)

    @classmethod
    def depolarizing(cls, p: float) -> "ErrorChannel":
        return cls(p / 3, p / 3, p / 3)


@dataclass(frozen=True)
class ErrorEvent:
    qubit: int
    pauli: str
    location: int
    trial: int = 0


@dataclass
class TrialRecord:
    trial: int
    events: list = field(default_factory=list)
    lcu_outcomes: list = field(default_factory=list)
    syndrome: tuple = ()
    recovery: str = ""
    fidelity: float = 0.0
    verdict: str = "clean"  # clean | corrected | logical-failure | leakage-failure


def trial_rngs(master_seed: int, trial: int):
    """Independent, order-invariant fault and measurement streams."""
    fault = np.random.default_rng([master_seed, trial, 0])
    meas = np.random.default_rng([master_seed, trial, 1])
    return fault, meas


def _fault_locations(gate, n_qubits: int):
    """(step, qubits) fault locations: per pulse when a gate is given, else
    one idle interval per qubit."""
    if gate is None:
        return [(0, tuple(range(1, n_qubits + 1)))]
    locations = []
    for step, pulse in enumerate(gate.pulses):
        if pulse.kind == "GF":
            locations.append((step, tuple(range(1, n_qubits + 1))))
        else:
            locations.append((step, (pulse.i, pulse.j)))
    return locations


def run_ft_round(
    code: HybridCode,
    gate,
    channel: ErrorChannel,
    lcu_on: bool,
    master_seed: int,
    trial: int = 0,
    initial: np.ndarray | None = None,
) -> TrialRecord:
    """One fault-injected round: gate pulses -> LCUs -> syndrome -> recovery.

    ``gate`` is a PulseSequence over the code's register or None for an idle
    (memory) round.  Returns the TrialRecord with verdict:

    * clean            no fault fired, final fidelity ~1
    * corrected        faults fired but the cycle restored the ideal state
    * leakage-failure  leakage survived to the syndrome stage (LCU off/overrun)
    * logical-failure  state in code space but wrong after recovery
    """
    fault_rng, meas_rng = trial_rngs(master_seed, trial)
    layout = code.layout
    n = code.n_qubits
    state = code.codewords[0].copy() if initial is None else initial.copy()
    ideal = state.copy()
    record = TrialRecord(trial)

    for step, qubits in _fault_locations(gate, n):
        if gate is not None:
            U = gate.pulse_unitary(gate.pulses[step])
            state = U @ state
            ideal = U @ ideal
        for q in qubits:
            letter = channel.sample(fault_rng)
            if letter is not None:
                record.events.append(ErrorEvent(q, letter, step, trial))
                state = apply_on_qubits(pauli_matrix(letter), (q,), state)

    if lcu_on:
        L = build_l_ideal()
        for block in range(1, layout.n_blocks + 1):
            outcome, state = lcu_round(state, block, layout, meas_rng, lcu_unitary=L, trial=trial)
            record.lcu_outcomes.append(outcome)

    try:
        syndrome, state = extract_syndrome(state, code, rng=meas_rng)
    except LeakagePrecondition:
        record.fidelity = state_fidelity(ideal, state)
        record.verdict = "leakage-failure"
        return record
    record.syndrome = syndrome
    state, recovery = correct(state, syndrome, code)
    record.recovery = recovery.label() if recovery is not None else "unrecognized"

    record.fidelity = state_fidelity(ideal, state)
    if record.fidelity >= CLEAN_FIDELITY:
        record.verdict = "clean" if not record.events else "corrected"
    else:
        record.verdict = "logical-failure"
    return record


def wilson_interval(successes: int, trials: int, z: float = 1.96):
    """Wilson score interval for a binomial proportion."""
    if trials == 0:
        return 0.0, 0.0, 1.0
    p = successes / trials
    denom = 1 + z**2 / trials
    center = (p + z**2 / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z**2 / (4 * trials**2)) / denom
    return p, max(0.0, center - half), min(1.0, center + half)


@dataclass
class SweepRow:
    p: float
    lcu_on: bool
    trials: int
    failures: int
    failure_rate: float
    ci_low: float
    ci_high: float
    verdicts: dict

    def as_csv(self) -> str:
        return (
            f"{self.p!r},{'on' if self.lcu_on else 'off'},{self.trials},{self.failures},"
            f"{self.failure_rate:.6f},{self.ci_low:.6f},{self.ci_high:.6f}"
        )


SWEEP_HEADER = "p,lcu,trials,failures,failure_rate,wilson_low,wilson_high"


def sweep(
    code: HybridCode,
    gate,
    channel_of_p,
    p_grid,
    trials: int,
    master_seed: int,
    policies=(True, False),
) -> list:
    """Failure rates over a grid of fault strengths and LCU policies.

    channel_of_p maps a grid value to an ErrorChannel.  Deterministic for a
    fixed master seed: trial t of every (p, policy) cell replays the same
    fault stream, so policy comparisons are paired.
    """
    rows = []
    for p in p_grid:
        channel = channel_of_p(p)
        for lcu_on in policies:
            failures = 0
            verdicts = {}
            for t in range(trials):
                rec = run_ft_round(code, gate, channel, lcu_on, master_seed, trial=t)
                verdicts[rec.verdict] = verdicts.get(rec.verdict, 0) + 1
                if rec.verdict in ("logical-failure", "leakage-failure"):
                    failures += 1
            rate, lo, hi = wilson_interval(failures, trials)
            rows.append(SweepRow(p, lcu_on, trials, failures, rate, lo, hi, verdicts))
    return rows


# ---------------------------------------------------------------------------
# fault-injected LCU batches (empirical omega and p_c)
# ---------------------------------------------------------------------------


@dataclass
class LcuBatchRow:
    p: float
    trials: int
    omega: float
    p_c: float
    n_used: int
    success_rate: float

    def as_csv(self) -> str:
        return (
            f"{self.p!r},{self.trials},{self.omega:.6f},{self.p_c:.6f},"
            f"{self.n_used},{self.success_rate:.6f}"
        )


LCU_BATCH_HEADER = "p_injected,trials,omega_empirical,p_c_empirical,n_used,success_rate"


def lcu_fault_batch(
    model,
    p: float,
    trials: int,
    master_seed: int,
    confidence: float = 0.99,
    channel: ErrorChannel | None = None,
) -> LcuBatchRow:
    """Estimate the leakage unit's conclusive-and-correct probability under
    per-pulse Pauli faults.

    Each trial runs the synthesized LCU pulse sequence on data |0_L> and a
    fresh ancilla |0_L>, sampling a fault on every qubit a pulse touches.
    omega is the fraction of trials with the ancilla measured in |0_L>; p_c
    counts trials that are conclusive *and* leave the data correctly in
    |0_L>, divided by omega (the conditional success probability).  n_used
    and success_rate come from the repetition protocol at that p_c.
    """
    from .encoding import BlockLayout, BlockResult, measure_block
    from .lcu import LcuSpec, required_repetitions, simulate_boosting, synth_lcu

    channel = channel or ErrorChannel.depolarizing(p)
    spec = LcuSpec(model=ExchangeModel(model) if not isinstance(model, ExchangeModel) else model)
    seq = synth_lcu(spec.model)
    unitaries = [seq.pulse_unitary(pl) for pl in seq.pulses]
    touched = [
        tuple(range(1, spec.n_qubits + 1)) if pl.kind == "GF" else (pl.i, pl.j)
        for pl in seq.pulses
    ]
    layout = BlockLayout(2)
    init = spec.fresh_register()
    zero_l = basis_state(2, "01")
    conclusive = 0
    conclusive_and_correct = 0
    for t in range(trials):
        fault_rng, meas_rng = trial_rngs(master_seed, t)
        state = init.copy()
        for U, qs in zip(unitaries, touched):
            state = U @ state
            for q in qs:
                letter = channel.sample(fault_rng)
                if letter is not None:
                    state = apply_on_qubits(pauli_matrix(letter), (q,), state)
        outcome = measure_block(state, 2, layout, meas_rng)
        if outcome.result is BlockResult.ZERO_L:
            conclusive += 1
            data = outcome.post_state.reshape(4, 4)[:, 0b01]
            ok = abs(np.vdot(zero_l, data)) ** 2 / max(np.vdot(data, data).real, 1e-300)
            if ok >= CLEAN_FIDELITY:
                conclusive_and_correct += 1
    omega = conclusive / trials
    p_c = conclusive_and_correct / conclusive if conclusive else 0.0
    if 0.0 < p_c < 1.0:
        n_used = required_repetitions(p_c, confidence)
        success = simulate_boosting(p_c, confidence, min(trials, 100_000), master_seed + 1)[
            "success_rate"
        ]
    else:
        n_used = 1
        success = p_c
    return LcuBatchRow(p, trials, omega, p_c, n_used, success)


# ---------------------------------------------------------------------------
# transversality checking
# ---------------------------------------------------------------------------


@dataclass
class TransversalityFinding:
    error: str
    blocks_in: tuple
    blocks_out: tuple
    spreads: bool


@dataclass
class TransversalityReport:
    gate_name: str
    findings: list

    @property
    def transversal(self) -> bool:
        return not any(f.spreads for f in self.findings)


def _block_support(support, block_of):
    return tuple(sorted({block_of[q] for q in support}))


def transversality_check(
    gate_unitary: np.ndarray,
    block_of: dict,
    name: str = "gate",
    errors=None,
) -> TransversalityReport:
    """Does conjugation through the gate keep errors to one block per codeword?

    ``block_of`` maps each qubit of the gate's register to a (codeword, block)
    pair.  Every single-block error (physical and logical representatives) is
    conjugated through the gate; the gate spreads if the image acts on more
    than one block of any single codeword.
    """
    n = int(np.log2(gate_unitary.shape[0]))
    blocks = sorted(set(block_of.values()))
    qubits_of_block = {b: tuple(q for q, bb in block_of.items() if bb == b) for b in blocks}
    if errors is None:
        errors = []
        for b in blocks:
            qs = qubits_of_block[b]
            for q in qs:
                for letter in "XYZ":
                    label = "".join(letter if qq == q else "I" for qq in range(1, n + 1))
                    errors.append(label)
            if len(qs) == 2:
                for pair_op in ("XX", "YX", "ZI"):  # lifted logical X, Y, Z
                    label = "".join(
                        pair_op[qs.index(qq)] if qq in qs else "I" for qq in range(1, n + 1)
                    )
                    errors.append(label)
    findings = []
    for label in errors:
        E = PauliString.from_label(label).to_matrix()
        image = gate_unitary @ E @ gate_unitary.conj().T
        support_in = PauliString.from_label(label).support
        support_out = operator_support(image)
        cw_blocks_in = {}
        cw_blocks_out = {}
        for q in support_in:
            cw, blk = block_of[q]
            cw_blocks_in.setdefault(cw, set()).add(blk)
        for q in support_out:
            cw, blk = block_of[q]
            cw_blocks_out.setdefault(cw, set()).add(blk)
        spreads = any(len(bs) > 1 for bs in cw_blocks_out.values())
        findings.append(
            TransversalityFinding(
                error=label,
                blocks_in=_block_support(support_in, block_of),
                blocks_out=_block_support(support_out, block_of),
                spreads=spreads,
            )
        )
    return TransversalityReport(name, findings)
