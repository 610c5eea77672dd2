"""Dense complex linear algebra for small qubit registers.

Conventions used throughout the package:

* Basis ordering: for a ket |q1 q2 ... qn> qubit 1 is the *most significant*
  bit of the state-vector index, so |q1 ... qn> sits at index
  sum_i q_i 2^(n-i).
* |0> is the +1 eigenstate of Z, i.e. Z = diag(1, -1).
* States are plain complex ndarrays of length 2^n; operators are square
  complex ndarrays of dimension 2^n.  Registers are capped at MAX_QUBITS.
* Evolution follows exp(-i t H): positive durations evolve forward.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

MAX_QUBITS = 16

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

PAULIS = {"I": PAULI_I, "X": PAULI_X, "Y": PAULI_Y, "Z": PAULI_Z}


@dataclass(frozen=True)
class Tolerances:
    """Central numerical tolerances.

    operator: entrywise tolerance for operator equality / unitarity checks.
    state: squared-norm and orthonormality tolerance for states/subspaces.
    """

    operator: float = 1e-10
    state: float = 1e-12


TOL = Tolerances()


def n_qubits_of(dim: int) -> int:
    """Number of qubits for a Hilbert-space dimension; rejects non powers of two."""
    n = int(dim).bit_length() - 1
    if dim <= 0 or 2**n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    if n > MAX_QUBITS:
        raise ValueError(f"register of {n} qubits exceeds the {MAX_QUBITS}-qubit cap")
    return n


def check_register(n: int) -> int:
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"register size {n} outside 1..{MAX_QUBITS}")
    return n


def basis_state(n: int, bits) -> np.ndarray:
    """Computational basis state |bits> on n qubits.

    ``bits`` may be a string like "0110", an iterable of 0/1, or an integer
    index (qubit 1 = most significant bit).
    """
    check_register(n)
    if isinstance(bits, str):
        idx = int(bits, 2)
        if len(bits) != n:
            raise ValueError(f"bit string {bits!r} does not match n={n}")
    elif isinstance(bits, (int, np.integer)):
        idx = int(bits)
    else:
        bit_list = list(bits)
        if len(bit_list) != n:
            raise ValueError("bit sequence length does not match register size")
        idx = int("".join(str(int(b)) for b in bit_list), 2)
    state = np.zeros(2**n, dtype=complex)
    state[idx] = 1.0
    return state


def kron_all(*ops) -> np.ndarray:
    return reduce(np.kron, [np.asarray(op, dtype=complex) for op in ops])


def pauli_matrix(label: str) -> np.ndarray:
    """Dense matrix of a Pauli label such as "XZ" or "IYX" (qubit 1 leftmost)."""
    try:
        return kron_all(*(PAULIS[c] for c in label))
    except KeyError as exc:
        raise ValueError(f"unknown Pauli letter in {label!r}") from exc


def kron_embed(op, targets, n: int) -> np.ndarray:
    """Embed ``op`` acting on the listed qubits of an n-qubit register.

    targets are 1-based and ordered: ``kron_embed(A, (3, 1), n)`` puts the
    first tensor factor of A on qubit 3 and the second on qubit 1.  All other
    qubits get the identity.
    """
    check_register(n)
    targets = tuple(int(t) for t in targets)
    if len(set(targets)) != len(targets):
        raise ValueError(f"duplicate target qubits in {targets}")
    if any(t < 1 or t > n for t in targets):
        raise ValueError(f"target qubits {targets} outside 1..{n}")
    op = np.asarray(op, dtype=complex)
    k = len(targets)
    if op.shape != (2**k, 2**k):
        raise ValueError(f"operator shape {op.shape} does not match {k} target qubits")
    if k == n and targets == tuple(range(1, n + 1)):
        return op.copy()
    full = np.kron(op, np.eye(2 ** (n - k), dtype=complex))
    # full currently acts on qubit order: targets..., remaining ascending.
    order = list(targets) + [q for q in range(1, n + 1) if q not in targets]
    perm = [order.index(q) for q in range(1, n + 1)]
    tensor = full.reshape([2] * (2 * n))
    tensor = tensor.transpose(perm + [n + p for p in perm])
    return np.ascontiguousarray(tensor.reshape(2**n, 2**n))


def apply_on_qubits(op, targets, state: np.ndarray) -> np.ndarray:
    """Apply a small gate to the listed qubits of a state without building
    the full 2^n operator."""
    n = n_qubits_of(state.shape[0])
    targets = tuple(int(t) for t in targets)
    k = len(targets)
    op = np.asarray(op, dtype=complex)
    if op.shape != (2**k, 2**k):
        raise ValueError("gate dimension does not match target count")
    axes = [t - 1 for t in targets]
    tensor = state.reshape([2] * n)
    tensor = np.moveaxis(tensor, axes, range(k))
    tensor = (op @ tensor.reshape(2**k, -1)).reshape([2] * n)
    tensor = np.moveaxis(tensor, range(k), axes)
    return np.ascontiguousarray(tensor.reshape(-1))


def is_hermitian(H, tol: float = TOL.state) -> bool:
    H = np.asarray(H)
    return bool(np.max(np.abs(H - H.conj().T)) <= tol)


def is_unitary(U, tol: float = TOL.operator) -> bool:
    U = np.asarray(U)
    d = U.shape[0]
    return bool(np.max(np.abs(U.conj().T @ U - np.eye(d))) <= tol)


def expm_hermitian(H, t: float) -> np.ndarray:
    """exp(-i t H) for Hermitian H, via eigendecomposition.

    Rejects non-Hermitian input; the result is unitary to working precision
    by construction.
    """
    H = np.asarray(H, dtype=complex)
    if not is_hermitian(H, TOL.state * max(1.0, np.max(np.abs(H)) if H.size else 1.0)):
        raise ValueError("expm_hermitian requires a Hermitian matrix")
    w, V = np.linalg.eigh(H)
    return (V * np.exp(-1j * t * w)) @ V.conj().T


def equal_up_to_phase(A, B, tol: float = TOL.operator):
    """Whether A = e^{i phi} B entrywise within tol; returns (flag, phi).

    phi is read off the largest-magnitude entry of B^dagger A, which for
    genuinely phase-equal unitaries lies on the diagonal.
    """
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    if A.shape != B.shape:
        raise ValueError("shape mismatch")
    M = B.conj().T @ A
    idx = np.unravel_index(np.argmax(np.abs(M)), M.shape)
    entry = M[idx]
    if abs(entry) == 0:
        return False, 0.0
    phi = float(np.angle(entry))
    return bool(np.max(np.abs(A - np.exp(1j * phi) * B)) <= tol), phi


def orthonormal_columns(basis, tol: float = TOL.state) -> np.ndarray:
    """Validate and return a (dim, k) matrix with orthonormal columns."""
    B = np.asarray(basis, dtype=complex)
    if B.ndim == 1:
        B = B[:, None]
    gram = B.conj().T @ B
    if np.max(np.abs(gram - np.eye(B.shape[1]))) > tol:
        raise ValueError("subspace basis columns are not orthonormal")
    return B


def restricted_fidelity(U, V_target, basis) -> float:
    """Phase-insensitive gate fidelity of U against V_target on a subspace.

    ``basis`` holds orthonormal columns spanning the subspace S, which must be
    invariant under V_target.  Returns |Tr(P V^dag U P)| / dim(S); equals 1
    exactly when U acts as V_target on S up to a global phase.
    """
    B = orthonormal_columns(basis)
    U = np.asarray(U, dtype=complex)
    V = np.asarray(V_target, dtype=complex)
    VB = V @ B
    leak = VB - B @ (B.conj().T @ VB)
    if np.max(np.abs(leak)) > 1e-9:
        raise ValueError("subspace is not invariant under the target unitary")
    k = B.shape[1]
    return float(abs(np.trace(VB.conj().T @ (U @ B))) / k)


def lift_logical(V_logical, basis) -> np.ndarray:
    """Extend a k-dim operator on a subspace to the full space.

    Acts as V_logical on the span of ``basis`` (orthonormal columns) and as
    the identity on the orthogonal complement, so the subspace is invariant
    by construction.
    """
    B = orthonormal_columns(basis)
    V = np.asarray(V_logical, dtype=complex)
    d = B.shape[0]
    P = B @ B.conj().T
    return B @ V @ B.conj().T + (np.eye(d) - P)


def state_fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """|<a|b>|^2 between two (not necessarily normalized) state vectors."""
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0 or nb == 0:
        return 0.0
    return float(abs(np.vdot(a, b)) ** 2 / (na**2 * nb**2))


def random_hermitian(n: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Random Hermitian matrix on n qubits (GUE-style), for property tests."""
    d = 2**n
    M = rng.normal(size=(d, d), scale=scale) + 1j * rng.normal(size=(d, d), scale=scale)
    return (M + M.conj().T) / 2
