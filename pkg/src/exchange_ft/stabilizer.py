"""Hybrid stabilizer codes over pair-encoded logical qubits.

A base stabilizer code on n_blocks qubits is lifted to 2*n_blocks physical
qubits by replacing each logical letter with a Pauli-string representative
that intertwines the pair encoding |0> -> |01>, |1> -> |10>:

    X -> X X        (acts as logical X on the pair, kills leakage phases)
    Y -> Y X        (the faithful representative: Y(x)Y acts as logical X)
    Z -> Z I        (+1 on |01>, -1 on |10>)

Every lifted generator containing an X or Y letter on block i anticommutes
with both single-qubit phase flips Z_{2i-1}, Z_{2i}, which is what makes
physical phase flips correctable at the outer level.  Physical bit flips
instead cause leakage and are handed to the leakage-correction unit first.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .encoding import (
    BlockLayout,
    block_basis_states,
    code_subspace_basis,
    encode,
    total_leakage_weight,
)
from .linalg import kron_embed, n_qubits_of, pauli_matrix

# ---------------------------------------------------------------------------
# Pauli strings with symplectic bookkeeping
# ---------------------------------------------------------------------------

_MUL_PHASE = {}  # (left, right) -> (result letter, power of i)
for _a, (_x1, _z1) in {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}.items():
    for _b, (_x2, _z2) in {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}.items():
        _x, _z = _x1 ^ _x2, _z1 ^ _z2
        _letter = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}[(_x, _z)]
        # convention Y = i X Z; phase of (X^x1 Z^z1)(X^x2 Z^z2) relative to the
        # canonical result letter: 2 z1 x2 from commuting Z past X, plus the
        # i-factor mismatch between operand letters and the result letter
        _phase = (2 * _z1 * _x2 + _x1 * _z1 + _x2 * _z2 - _x * _z) % 4
        _MUL_PHASE[(_a, _b)] = (_letter, _phase)


@dataclass(frozen=True)
class PauliString:
    """n-qubit Pauli operator: phase i^phase_exp times a letter per qubit."""

    letters: str
    phase_exp: int = 0  # power of i in {0, 1, 2, 3}

    def __post_init__(self):
        if any(c not in "IXYZ" for c in self.letters):
            raise ValueError(f"bad Pauli letters {self.letters!r}")
        object.__setattr__(self, "phase_exp", self.phase_exp % 4)

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse labels like "XXI", "-ZZI", "+iYX"."""
        phase = 0
        body = label.strip()
        if body.startswith("+"):
            body = body[1:]
        if body.startswith("-"):
            phase = 2
            body = body[1:]
        if body.startswith("i"):
            phase += 1
            body = body[1:]
        return cls(body, phase)

    @property
    def n(self) -> int:
        return len(self.letters)

    @property
    def phase(self) -> complex:
        return 1j**self.phase_exp

    @property
    def weight(self) -> int:
        return sum(c != "I" for c in self.letters)

    @property
    def support(self) -> tuple:
        return tuple(q for q, c in enumerate(self.letters, start=1) if c != "I")

    def __mul__(self, other: "PauliString") -> "PauliString":
        if self.n != other.n:
            raise ValueError("length mismatch")
        letters = []
        phase = self.phase_exp + other.phase_exp
        for a, b in zip(self.letters, other.letters):
            letter, extra = _MUL_PHASE[(a, b)]
            letters.append(letter)
            phase += extra
        return PauliString("".join(letters), phase % 4)

    def commutes_with(self, other: "PauliString") -> bool:
        anti = 0
        for a, b in zip(self.letters, other.letters):
            if a != "I" and b != "I" and a != b:
                anti ^= 1
        return anti == 0

    def to_matrix(self, n: int | None = None) -> np.ndarray:
        n = self.n if n is None else n
        if n != self.n:
            raise ValueError("explicit n must match string length")
        return self.phase * pauli_matrix(self.letters)

    def label(self) -> str:
        prefix = {0: "", 1: "i", 2: "-", 3: "-i"}[self.phase_exp]
        return prefix + self.letters


# ---------------------------------------------------------------------------
# base codes and their pair-encoded lift
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BaseCode:
    """Stabilizer code at the logical-block level."""

    name: str
    n: int
    generators: tuple  # of PauliString
    logical_z: PauliString
    logical_x: PauliString

    def __post_init__(self):
        for g in self.generators:
            if g.n != self.n:
                raise ValueError("generator length mismatch")
        for a, b in itertools.combinations(self.generators, 2):
            if not a.commutes_with(b):
                raise ValueError(f"generators {a.label()} and {b.label()} do not commute")

    def codewords(self) -> tuple:
        """|0>, |1> of the base code via stabilizer + logical-Z projection."""
        dim = 2**self.n
        P = np.eye(dim, dtype=complex)
        for g in self.generators:
            P = P @ (np.eye(dim) + g.to_matrix()) / 2
        Zl = self.logical_z.to_matrix()
        zero = P @ (np.eye(dim) + Zl) / 2
        # project a full-rank probe to find a nonzero representative
        for col in range(dim):
            v = zero[:, col]
            if np.linalg.norm(v) > 1e-9:
                zero_state = v / np.linalg.norm(v)
                break
        else:
            raise ValueError("stabilizer projector is empty")
        one_state = self.logical_x.to_matrix() @ zero_state
        one_state = one_state / np.linalg.norm(one_state)
        return zero_state, one_state


def base_code_from_strings(name: str, generators, logical_z: str, logical_x: str) -> BaseCode:
    gens = tuple(PauliString.from_label(g) for g in generators)
    return BaseCode(name, gens[0].n, gens, PauliString.from_label(logical_z),
                    PauliString.from_label(logical_x))


PHASE_FLIP_3 = base_code_from_strings(
    "phase3", ["XXI", "IXX"], logical_z="XII", logical_x="ZZZ"
)

FIVE_QUBIT = base_code_from_strings(
    "five", ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"], logical_z="ZZZZZ", logical_x="XXXXX"
)

PRESETS = {"phase3": PHASE_FLIP_3, "five": FIVE_QUBIT}

_LIFT = {"I": "II", "X": "XX", "Y": "YX", "Z": "ZI"}


def lift_pauli(base: PauliString) -> PauliString:
    """Pair-encoded representative of a block-level Pauli string."""
    letters = "".join(_LIFT[c] for c in base.letters)
    return PauliString(letters, base.phase_exp)


@dataclass
class HybridCode:
    """A base stabilizer code whose qubits are pair-encoded blocks."""

    base: BaseCode
    layout: BlockLayout
    generators: tuple = ()  # lifted PauliStrings on 2*n physical qubits
    codewords: tuple = ()  # physical |0_H>, |1_H>
    logical_z: PauliString = None
    logical_x: PauliString = None
    _decoder: dict = field(default_factory=dict, repr=False)
    _gen_matrices: tuple = field(default=(), repr=False)

    @property
    def n_qubits(self) -> int:
        return self.layout.n_qubits

    @property
    def n_blocks(self) -> int:
        return self.layout.n_blocks

    def generator_matrices(self) -> tuple:
        if not self._gen_matrices:
            self._gen_matrices = tuple(g.to_matrix() for g in self.generators)
        return self._gen_matrices

    def syndrome_of(self, error: PauliString) -> tuple:
        return tuple(0 if g.commutes_with(error) else 1 for g in self.generators)

    def decoder_table(self) -> dict:
        """Syndrome -> minimum-weight block-level recovery (lifted rep).

        Candidates are enumerated by increasing block weight, block index,
        then letter (Z before X before Y: phase-type recoveries win ties,
        matching what the leakage-corrected error model produces most).
        """
        if self._decoder:
            return self._decoder
        table = {tuple(0 for _ in self.generators): PauliString("I" * self.n_qubits)}
        letters = "ZXY"
        singles = [
            (block, letter) for block in range(1, self.n_blocks + 1) for letter in letters
        ]
        for weight in (1, 2):
            for combo in itertools.combinations(singles, weight):
                blocks = [b for b, _ in combo]
                if len(set(blocks)) != weight:
                    continue
                base_letters = ["I"] * self.base.n
                for b, letter in combo:
                    base_letters[b - 1] = letter
                rec = lift_pauli(PauliString("".join(base_letters)))
                syn = self.syndrome_of(rec)
                table.setdefault(syn, rec)
        self._decoder = table
        return table


def build_hybrid(base, layout: BlockLayout | None = None) -> HybridCode:
    """Lift a base stabilizer code to the physical pair-encoded register.

    Accepts a BaseCode, a preset name, or an iterable of generator strings
    (in which case logical operators must come from a preset-compatible
    BaseCode instead).  Validates that the lifted generators commute and
    stabilize both lifted codewords.
    """
    if isinstance(base, str):
        base = PRESETS[base]
    if not isinstance(base, BaseCode):
        raise TypeError("base must be a BaseCode or preset name")
    layout = layout or BlockLayout(base.n)
    if layout.n_blocks != base.n:
        raise ValueError("layout block count does not match base code size")
    gens = tuple(lift_pauli(g) for g in base.generators)
    for a, b in itertools.combinations(gens, 2):
        if not a.commutes_with(b):
            raise ValueError("lifted generators do not commute")
    zero_b, one_b = base.codewords()
    codewords = (encode(zero_b, layout), encode(one_b, layout))
    for g in gens:
        G = g.to_matrix()
        for word in codewords:
            if np.linalg.norm(G @ word - word) > 1e-9:
                raise ValueError(f"lifted generator {g.label()} does not stabilize a codeword")
    return HybridCode(
        base,
        layout,
        generators=gens,
        codewords=codewords,
        logical_z=lift_pauli(base.logical_z),
        logical_x=lift_pauli(base.logical_x),
    )


# ---------------------------------------------------------------------------
# classifying two-qubit errors on one block
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BlockErrorVerdict:
    kind: str  # "identity" | "logical" | "leakage"
    logical_op: str = ""  # I, X, Y or Z when kind == "logical"
    factor: complex = 1.0

    def describe(self) -> str:
        if self.kind != "logical":
            return self.kind
        sign = {1.0: "+", -1.0: "-", 1j: "+i", -1j: "-i"}.get(complex(self.factor), "?")
        return f"logical {sign}{self.logical_op}"


_CODE_BASIS_2Q = np.zeros((4, 2), dtype=complex)
_CODE_BASIS_2Q[1, 0] = 1.0  # |01> = |0_L>
_CODE_BASIS_2Q[2, 1] = 1.0  # |10> = |1_L>
_LOGICAL_2x2 = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def classify_block_error(error) -> BlockErrorVerdict:
    """How a two-qubit Pauli on one block acts on the pair encoding.

    The restriction of the error to the block's code subspace is either a
    scalar multiple of a logical Pauli (verdict "logical", with the scalar
    reported) or zero, in which case the error moves code population into the
    leakage subspace (verdict "leakage").
    """
    if isinstance(error, str):
        error = PauliString.from_label(error)
    if error.n != 2:
        raise ValueError("block errors act on exactly two physical qubits")
    E = error.to_matrix()
    restricted = _CODE_BASIS_2Q.conj().T @ E @ _CODE_BASIS_2Q
    if np.max(np.abs(restricted)) < 1e-12:
        return BlockErrorVerdict("leakage")
    for name, op in _LOGICAL_2x2.items():
        overlap = np.trace(op.conj().T @ restricted) / 2
        if np.max(np.abs(restricted - overlap * op)) < 1e-12 and abs(overlap) > 1e-12:
            if abs(abs(overlap) - 1.0) > 1e-12:
                break  # partial overlap: not a clean logical action
            if name == "I" and np.isclose(complex(overlap), 1.0):
                return BlockErrorVerdict("identity")
            return BlockErrorVerdict("logical", name, complex(np.round(overlap, 12)))
    raise ValueError(f"unclassifiable block error {error.label()}")


# ---------------------------------------------------------------------------
# syndrome extraction and recovery
# ---------------------------------------------------------------------------

LEAK_SYNDROME_THRESHOLD = 1e-9


class LeakagePrecondition(ValueError):
    """State still carries leakage; run the leakage-correction unit first."""


def extract_syndrome(state: np.ndarray, code: HybridCode,
                     rng: np.random.Generator | None = None):
    """Projective measurement of every lifted generator.

    Returns (syndrome bits, post-measurement state).  The state must sit in
    the code-plus-correctable-error space: leakage above threshold is a
    precondition violation (the leakage unit runs before the QEC cycle).
    When the state is not an eigenstate of some generator, outcomes are
    Born-sampled with ``rng`` (required in that case).
    """
    n = n_qubits_of(state.shape[0])
    if n != code.n_qubits:
        raise ValueError("state size does not match code")
    leak = total_leakage_weight(state, code.layout)
    if leak > LEAK_SYNDROME_THRESHOLD:
        raise LeakagePrecondition(f"leakage weight {leak:.3e} above threshold")
    bits = []
    post = state
    for G in code.generator_matrices():
        plus = (post + G @ post) / 2
        p_plus = float(np.linalg.norm(plus) ** 2 / np.linalg.norm(post) ** 2)
        if p_plus > 1 - 1e-12:
            outcome, post = 0, plus
        elif p_plus < 1e-12:
            outcome, post = 1, (post - G @ post) / 2
        else:
            if rng is None:
                raise ValueError("state is not a generator eigenstate; pass an rng to sample")
            if rng.random() < p_plus:
                outcome, post = 0, plus
            else:
                outcome, post = 1, (post - G @ post) / 2
        bits.append(outcome)
    post = post / np.linalg.norm(post)
    return tuple(bits), post


def correct(state: np.ndarray, syndrome, code: HybridCode):
    """Apply the minimum-weight block-level recovery for the syndrome.

    Returns (state, recovery PauliString or None).  An unrecognized syndrome
    leaves the state untouched and reports None.
    """
    table = code.decoder_table()
    rec = table.get(tuple(syndrome))
    if rec is None:
        return state, None
    if rec.weight == 0:
        return state, rec
    return rec.to_matrix() @ state, rec


# ---------------------------------------------------------------------------
# fault propagation through pulse sequences
# ---------------------------------------------------------------------------


@dataclass
class PropagationReport:
    fault_qubit: int
    fault_letter: str
    insert_after: int
    boundary: bool  # insertion at a top-level factor boundary?
    support: tuple  # qubits on which the propagated operator acts nontrivially
    leaking_blocks: tuple  # blocks whose leakage sector the operator populates from code
    max_block_support: int  # largest per-block support size

    @property
    def single_qubit_leakage(self) -> bool:
        return len(self.support) <= 1 and bool(self.leaking_blocks)


def operator_support(op: np.ndarray, tol: float = 1e-9) -> tuple:
    """Qubits on which a dense operator acts nontrivially."""
    n = n_qubits_of(op.shape[0])
    support = []
    scale = max(np.max(np.abs(op)), 1e-300)
    tensor = op.reshape([2] * (2 * n))
    for q in range(1, n + 1):
        # op acts trivially on q iff op == I_q (x) (partial trace over q)/2
        reduced = np.trace(tensor, axis1=q - 1, axis2=n + q - 1) / 2
        rest = [r for r in range(1, n + 1) if r != q]
        if rest:
            candidate = kron_embed(reduced.reshape(2 ** (n - 1), 2 ** (n - 1)), tuple(rest), n)
        else:
            candidate = complex(reduced) * np.eye(2)
        if np.max(np.abs(op - candidate)) > tol * scale:
            support.append(q)
    return tuple(support)


def propagate_fault(
    sequence,
    fault_qubit: int,
    fault_letter: str,
    insert_after: int,
    layout: BlockLayout | None = None,
) -> PropagationReport:
    """Conjugate a single-qubit Pauli fault through the rest of a sequence.

    The fault acts after ``insert_after`` pulses (0 = before the gate); the
    report describes U_rest E U_rest^dag: its qubit support, and which blocks
    it can leak out of the joint code subspace.
    """
    n = sequence.n_qubits
    layout = layout or BlockLayout(n // 2)
    if not 0 <= insert_after <= sequence.pulse_count:
        raise ValueError("insertion point outside the sequence")
    E = kron_embed(pauli_matrix(fault_letter), (fault_qubit,), n)
    U_rest = np.eye(2**n, dtype=complex)
    for pulse in sequence.pulses[insert_after:]:
        U_rest = sequence.pulse_unitary(pulse) @ U_rest
    prop = U_rest @ E @ U_rest.conj().T
    support = operator_support(prop)
    C = code_subspace_basis(layout)
    image = prop @ C
    leaking = []
    for block in range(1, layout.n_blocks + 1):
        mask = np.zeros(2**n, dtype=bool)
        for pattern in (0b00, 0b11):
            mask |= block_basis_states(pattern, block, layout)
        if np.max(np.abs(image[mask, :])) > 1e-9:
            leaking.append(block)
    per_block = {}
    for q in support:
        block = (q + 1) // 2
        per_block[block] = per_block.get(block, 0) + 1
    return PropagationReport(
        fault_qubit=fault_qubit,
        fault_letter=fault_letter,
        insert_after=insert_after,
        boundary=insert_after in sequence.segment_boundaries(),
        support=support,
        leaking_blocks=tuple(leaking),
        max_block_support=max(per_block.values(), default=0),
    )
