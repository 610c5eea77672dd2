"""Exchange Hamiltonians and the global free Hamiltonian.

A coupled qubit pair (i, j) contributes

    H_ij = J_ij (X_i X_j + Y_i Y_j) + Jz_ij Z_i Z_j

and the globally controllable free Hamiltonian is H_0 = sum_i (omega_i / 2) Z_i
with pairwise distinct omega_i.  Units are dimensionless (hbar = 1); pulse
angles are products like t*J.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .linalg import PAULI_X, PAULI_Y, PAULI_Z, check_register, kron_all, kron_embed

NEIGHBOR_RANGE = 2  # default validation: couplings only for |i - j| <= 2


class ExchangeModel(str, enum.Enum):
    HEISENBERG = "heisenberg"
    XXZ = "xxz"
    XY = "xy"

    def validate_coupling(self, J: float, Jz: float) -> None:
        """Enforce the model's constraint between the XY and Ising strengths."""
        if self is ExchangeModel.HEISENBERG:
            if Jz != J:
                raise ValueError(f"Heisenberg coupling requires Jz == J, got J={J}, Jz={Jz}")
        elif self is ExchangeModel.XY:
            if Jz != 0:
                raise ValueError(f"XY coupling requires Jz == 0, got Jz={Jz}")
        else:  # XXZ
            if Jz == 0 or Jz == J:
                raise ValueError(f"XXZ coupling requires Jz != 0 and Jz != J, got J={J}, Jz={Jz}")

    def default_jz(self, J: float) -> float:
        if self is ExchangeModel.HEISENBERG:
            return J
        if self is ExchangeModel.XY:
            return 0.0
        return J / 2.0


@dataclass(frozen=True)
class Coupling:
    i: int
    j: int
    J: float
    Jz: float

    def __post_init__(self):
        if not self.i < self.j:
            raise ValueError(f"coupling requires i < j, got ({self.i}, {self.j})")


@dataclass
class CouplingGraph:
    """Which exchange terms exist on the register and their strengths.

    By default couplings are restricted to |i - j| <= NEIGHBOR_RANGE, matching
    what typical hardware can control; pass allow_long_range=True to lift the
    restriction for experiments (ring layouts etc.).
    """

    n_qubits: int
    couplings: dict = field(default_factory=dict)  # (i, j) -> Coupling
    allow_long_range: bool = False

    def __post_init__(self):
        check_register(self.n_qubits)
        for c in list(self.couplings.values()):
            self._validate(c)

    def _validate(self, c: Coupling) -> None:
        if c.j > self.n_qubits:
            raise ValueError(f"coupling ({c.i}, {c.j}) outside register of {self.n_qubits}")
        if not self.allow_long_range and c.j - c.i > NEIGHBOR_RANGE:
            raise ValueError(
                f"coupling ({c.i}, {c.j}) exceeds the |i-j| <= {NEIGHBOR_RANGE} range; "
                "construct the graph with allow_long_range=True to permit it"
            )

    def add(self, i: int, j: int, J: float, Jz: float) -> None:
        c = Coupling(min(i, j), max(i, j), J, Jz)
        self._validate(c)
        self.couplings[(c.i, c.j)] = c

    def coupling(self, i: int, j: int) -> Coupling:
        key = (min(i, j), max(i, j))
        if key not in self.couplings:
            raise KeyError(f"no coupling between qubits {key[0]} and {key[1]}")
        return self.couplings[key]

    def has_coupling(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.couplings

    @classmethod
    def for_model(
        cls,
        model: ExchangeModel,
        n_qubits: int,
        J: float = 1.0,
        Jz: float | None = None,
        extra_pairs=(),
        max_range: int = NEIGHBOR_RANGE,
    ) -> "CouplingGraph":
        """Uniform graph with all pairs within max_range, plus explicit extras.

        Extra pairs beyond the neighbor range switch the graph to
        allow_long_range (e.g. a ring layout where distant indices are
        physically adjacent).
        """
        Jz = model.default_jz(J) if Jz is None else Jz
        model.validate_coupling(J, Jz)
        long_range = any(j - i > NEIGHBOR_RANGE for i, j in extra_pairs) or max_range > NEIGHBOR_RANGE
        graph = cls(n_qubits, {}, allow_long_range=long_range)
        for i in range(1, n_qubits + 1):
            for j in range(i + 1, min(i + max_range, n_qubits) + 1):
                graph.add(i, j, J, Jz)
        for i, j in extra_pairs:
            graph.add(i, j, J, Jz)
        return graph


@dataclass(frozen=True)
class GlobalField:
    """Zeeman frequencies omega_i of H_0; must be pairwise distinct."""

    omegas: tuple

    def __post_init__(self):
        omegas = tuple(float(w) for w in self.omegas)
        object.__setattr__(self, "omegas", omegas)
        if len(set(omegas)) != len(omegas):
            raise ValueError("global field frequencies must be pairwise distinct")

    @property
    def n_qubits(self) -> int:
        return len(self.omegas)

    def delta(self, i: int, k: int) -> float:
        """Frequency difference omega_i - omega_k."""
        return self.omegas[i - 1] - self.omegas[k - 1]

    @classmethod
    def linear(cls, n_qubits: int, spacing: float = 1.0) -> "GlobalField":
        return cls(tuple(spacing * q for q in range(1, n_qubits + 1)))


def exchange_term(J: float, Jz: float) -> np.ndarray:
    """Two-qubit matrix J (XX + YY) + Jz ZZ."""
    return J * (kron_all(PAULI_X, PAULI_X) + kron_all(PAULI_Y, PAULI_Y)) + Jz * kron_all(
        PAULI_Z, PAULI_Z
    )


def build_hij(i: int, j: int, J: float, Jz: float, n: int) -> np.ndarray:
    """Exchange Hamiltonian between qubits i < j embedded in an n-qubit register."""
    if not (1 <= i < j <= n):
        raise ValueError(f"need 1 <= i < j <= n, got i={i}, j={j}, n={n}")
    return kron_embed(exchange_term(J, Jz), (i, j), n)


def build_h0(fld: GlobalField, n: int | None = None) -> np.ndarray:
    """Global free Hamiltonian sum_i (omega_i / 2) Z_i (diagonal)."""
    n = fld.n_qubits if n is None else n
    if n != fld.n_qubits:
        raise ValueError("field length does not match register size")
    check_register(n)
    diag = np.zeros(2**n)
    for q, omega in enumerate(fld.omegas, start=1):
        z = np.where(np.arange(2**n) & (1 << (n - q)), -1.0, 1.0)
        diag = diag + 0.5 * omega * z
    return np.diag(diag.astype(complex))


def graph_hamiltonian(graph: CouplingGraph, i: int, j: int) -> np.ndarray:
    """H_ij built from the graph's stored coupling strengths."""
    c = graph.coupling(i, j)
    return build_hij(c.i, c.j, c.J, c.Jz, graph.n_qubits)
