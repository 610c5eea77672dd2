"""One logical qubit per pair of physical qubits.

Block i occupies physical qubits (2i-1, 2i) with

    |0_L> = |01>,   |1_L> = |10>

so the code subspace of a block is span{|01>, |10>} and the orthogonal
leakage subspace is span{|00>, |11>}.  Bit flips on a single physical qubit
move population between the two; phase flips stay inside the code subspace.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .linalg import apply_on_qubits, check_register, n_qubits_of

LEAK_EPS = 1e-9  # leakage weight below this is floating-point noise

# block-local basis indices: |00>=0, |01>=1, |10>=2, |11>=3
CODE_INDICES = (1, 2)  # |0_L>, |1_L>
LEAK_INDICES = (0, 3)  # |00>, |11>


class BlockResult(enum.Enum):
    ZERO_L = "0L"
    ONE_L = "1L"
    LEAK00 = "00"
    LEAK11 = "11"

    @property
    def leaked(self) -> bool:
        return self in (BlockResult.LEAK00, BlockResult.LEAK11)


# measurement outcome index (block basis) -> result
_OUTCOME_OF_INDEX = {
    0: BlockResult.LEAK00,
    1: BlockResult.ZERO_L,
    2: BlockResult.ONE_L,
    3: BlockResult.LEAK11,
}


@dataclass(frozen=True)
class BlockLayout:
    """Mapping block index -> physical qubit pair (2i-1, 2i)."""

    n_blocks: int

    def __post_init__(self):
        if self.n_blocks < 1:
            raise ValueError("need at least one block")
        check_register(2 * self.n_blocks)

    @property
    def n_qubits(self) -> int:
        return 2 * self.n_blocks

    def qubits(self, block: int):
        if not 1 <= block <= self.n_blocks:
            raise ValueError(f"block {block} outside 1..{self.n_blocks}")
        return (2 * block - 1, 2 * block)


@dataclass
class MeasurementOutcome:
    block: int
    result: BlockResult
    probability: float
    post_state: np.ndarray


class DecodeFailure(ValueError):
    """Raised when a state has no code-subspace component at all."""


def _code_index_arrays(layout: BlockLayout):
    """Physical index of each logical basis state, as an ndarray.

    Logical index bits map per block: 0 -> pattern 01, 1 -> pattern 10.
    """
    k = layout.n_blocks
    logical = np.arange(2**k)
    phys = np.zeros(2**k, dtype=np.int64)
    for b in range(k):
        bit = (logical >> (k - 1 - b)) & 1
        pattern = np.where(bit == 0, 0b01, 0b10)
        phys |= pattern << (2 * (k - 1 - b))
    return phys


def encode(logical, layout: BlockLayout) -> np.ndarray:
    """Map a logical state (vector of length 2^n_blocks, or an int/bit string)
    to the physical code subspace."""
    k = layout.n_blocks
    if isinstance(logical, (int, np.integer, str)):
        vec = np.zeros(2**k, dtype=complex)
        idx = int(logical, 2) if isinstance(logical, str) else int(logical)
        vec[idx] = 1.0
        logical = vec
    logical = np.asarray(logical, dtype=complex)
    if logical.shape != (2**k,):
        raise ValueError(f"logical dimension {logical.shape} != 2^{k}")
    state = np.zeros(2 ** layout.n_qubits, dtype=complex)
    state[_code_index_arrays(layout)] = logical
    return state


def decode(state: np.ndarray, layout: BlockLayout, renormalize: bool = True):
    """Project onto the joint code subspace and express it logically.

    Returns (logical_state, leakage_weight) where leakage_weight is the
    squared norm outside the code subspace.  Raises DecodeFailure when the
    state carries no code-subspace component.
    """
    n = n_qubits_of(state.shape[0])
    if n != layout.n_qubits:
        raise ValueError("state size does not match layout")
    logical = state[_code_index_arrays(layout)].copy()
    in_code = float(np.linalg.norm(logical) ** 2)
    total = float(np.linalg.norm(state) ** 2)
    leakage = max(0.0, total - in_code)
    if in_code <= 0.0:
        raise DecodeFailure("state has no component in the code subspace")
    if renormalize:
        logical = logical / np.sqrt(in_code)
    return logical, leakage


def code_subspace_basis(layout: BlockLayout) -> np.ndarray:
    """Orthonormal columns spanning the joint code subspace (2^n x 2^k)."""
    k = layout.n_blocks
    B = np.zeros((2 ** layout.n_qubits, 2**k), dtype=complex)
    B[_code_index_arrays(layout), np.arange(2**k)] = 1.0
    return B


def block_basis_states(pattern: int, block: int, layout: BlockLayout) -> np.ndarray:
    """Mask of physical indices whose block has the given 2-bit pattern."""
    n = layout.n_qubits
    hi, lo = layout.qubits(block)
    idx = np.arange(2**n)
    bits = ((idx >> (n - hi)) & 1) * 2 + ((idx >> (n - lo)) & 1)
    return bits == pattern


def block_leakage_weight(state: np.ndarray, block: int, layout: BlockLayout) -> float:
    """Population of the block's leakage subspace."""
    w = 0.0
    for pattern in LEAK_INDICES:
        mask = block_basis_states(pattern, block, layout)
        w += float(np.linalg.norm(state[mask]) ** 2)
    return w


def total_leakage_weight(state: np.ndarray, layout: BlockLayout) -> float:
    """Squared norm outside the joint code subspace."""
    logical = state[_code_index_arrays(layout)]
    return max(0.0, float(np.linalg.norm(state) ** 2 - np.linalg.norm(logical) ** 2))


def measure_block(
    state: np.ndarray,
    block: int,
    layout: BlockLayout,
    rng: np.random.Generator,
    misassign: float = 0.0,
) -> MeasurementOutcome:
    """Projective measurement of one block in its four-state basis.

    Samples among {|00>, |01>, |10>, |11>} with Born probabilities, collapses
    the state, and reports the outcome.  ``misassign`` optionally flips the
    *reported* label between 0_L and 1_L (and between the two leakage labels)
    with the given probability; the post-measurement state is unaffected.
    """
    n = n_qubits_of(state.shape[0])
    if n != layout.n_qubits:
        raise ValueError("state size does not match layout")
    masks = [block_basis_states(p, block, layout) for p in range(4)]
    probs = np.array([np.linalg.norm(state[m]) ** 2 for m in masks], dtype=float)
    probs = probs / probs.sum()
    outcome = int(rng.choice(4, p=probs))
    post = np.where(masks[outcome], state, 0.0)
    post = post / np.linalg.norm(post)
    result = _OUTCOME_OF_INDEX[outcome]
    if misassign > 0.0 and rng.random() < misassign:
        flip = {
            BlockResult.ZERO_L: BlockResult.ONE_L,
            BlockResult.ONE_L: BlockResult.ZERO_L,
            BlockResult.LEAK00: BlockResult.LEAK11,
            BlockResult.LEAK11: BlockResult.LEAK00,
        }
        result = flip[result]
    return MeasurementOutcome(block, result, float(probs[outcome]), post)


def reset_block(state: np.ndarray, block: int, layout: BlockLayout, outcome: BlockResult) -> np.ndarray:
    """Return the block from a just-measured basis state to |0_L>.

    Only valid right after measure_block, when the block factor is a known
    basis state; implemented as the bit flips mapping that state to |01>.
    """
    hi, lo = layout.qubits(block)
    flips = {
        BlockResult.ZERO_L: (),
        BlockResult.ONE_L: (hi, lo),
        BlockResult.LEAK00: (lo,),
        BlockResult.LEAK11: (hi,),
    }[outcome]
    out = state
    X = np.array([[0, 1], [1, 0]], dtype=complex)
    for q in flips:
        out = apply_on_qubits(X, (q,), out)
    return out
