"""Dense complex linear algebra, qubit states and density operators.

Basis ordering: index ``i`` of a length ``2**n`` vector encodes the bitstring
of ``i`` with qubit 0 as the most significant (leftmost) bit, so
``|ij> = |i> (x) |j>``.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

from .errors import BadProbabilities, DimensionMismatch, NonNormalized

STRUCT_TOL = 1e-12
PURITY_TOL = 1e-10
PSD_TOL = 1e-10
NORM_TOL = 1e-9


def eq_tol() -> float:
    """Tolerance for semantic equality of evaluated maps (``ZXFORGE_TOL`` overrides)."""
    value = os.environ.get("ZXFORGE_TOL")
    return float(value) if value else 1e-9


EQ_TOL = eq_tol()

SQRT2 = np.sqrt(2.0)

I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / SQRT2

KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)
KET_PLUS = np.array([1, 1], dtype=complex) / SQRT2
KET_MINUS = np.array([1, -1], dtype=complex) / SQRT2


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.asarray(a)).T


def kron(*mats) -> np.ndarray:
    if not mats:
        return np.ones((1, 1), dtype=complex)
    return reduce(np.kron, mats)


def is_unitary(u: np.ndarray, tol: float = STRUCT_TOL) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return np.max(np.abs(dagger(u) @ u - np.eye(u.shape[0]))) <= tol


def is_hermitian(a: np.ndarray, tol: float = STRUCT_TOL) -> bool:
    a = np.asarray(a)
    return a.shape[0] == a.shape[1] and np.max(np.abs(a - dagger(a)), initial=0.0) <= tol


def hermitian_eig(a: np.ndarray, clamp: float = PSD_TOL):
    """Eigen-decomposition of a Hermitian matrix, ascending eigenvalues.

    Eigenvalues in ``[-clamp, 0)`` are set to exactly 0.
    """
    a = np.asarray(a, dtype=complex)
    w, v = np.linalg.eigh((a + dagger(a)) / 2)
    w = np.where((w < 0) & (w >= -clamp), 0.0, w)
    return w, v


def n_qubits_for(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim <= 0 or 2**n != dim:
        raise DimensionMismatch(f"dimension {dim} is not a power of two")
    return n


@dataclass(frozen=True, eq=False)
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape[0] != 2**self.n_qubits:
            raise DimensionMismatch(
                f"{amps.shape[0]} amplitudes for {self.n_qubits} qubits")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amplitudes) -> StateVector:
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        return cls(n_qubits_for(amps.shape[0]), amps)

    @classmethod
    def basis(cls, bits: str) -> StateVector:
        """Computational basis state from a bitstring such as ``"01"``."""
        n = len(bits)
        amps = np.zeros(2**n, dtype=complex)
        amps[int(bits, 2) if bits else 0] = 1.0
        return cls(n, amps)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    @property
    def normalized(self) -> bool:
        return abs(self.norm - 1.0) <= STRUCT_TOL

    def tensor(self, other: StateVector) -> StateVector:
        return StateVector(self.n_qubits + other.n_qubits,
                           np.kron(self.amplitudes, other.amplitudes))

    def inner(self, other: StateVector) -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)


@dataclass(frozen=True, eq=False)
class DensityOperator:
    n_qubits: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        dim = 2**self.n_qubits
        if m.shape != (dim, dim):
            raise DimensionMismatch(f"density matrix of shape {m.shape} for {self.n_qubits} qubits")
        if not is_hermitian(m):
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > STRUCT_TOL:
            raise ValueError(f"density matrix trace {np.trace(m).real!r} != 1")
        if np.min(np.linalg.eigvalsh(m)) < -PSD_TOL:
            raise ValueError("density matrix is not positive semidefinite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_matrix(cls, matrix) -> DensityOperator:
        m = np.asarray(matrix, dtype=complex)
        return cls(n_qubits_for(m.shape[0]), m)

    @property
    def is_pure(self) -> bool:
        return purity_check(self)

    def eigh(self):
        return hermitian_eig(self.matrix)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


def bloch_to_state(theta: float, phi: float) -> StateVector:
    """``cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>`` with global phase fixed to 0."""
    theta = float(theta) % (2 * np.pi)
    phi = float(phi) % (2 * np.pi)
    return StateVector(1, [np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])


def density_from_pure(psi: StateVector) -> DensityOperator:
    if abs(psi.norm - 1.0) > NORM_TOL:
        raise NonNormalized(f"state norm {psi.norm!r} deviates from 1")
    a = psi.amplitudes
    return DensityOperator(psi.n_qubits, np.outer(a, np.conj(a)))


def density_from_ensemble(states: Sequence[StateVector], probs: Sequence[float]) -> DensityOperator:
    probs = np.asarray(probs, dtype=float)
    if len(states) == 0 or len(states) != probs.shape[0]:
        raise DimensionMismatch("need one probability per state")
    if np.any(probs < 0) or abs(probs.sum() - 1.0) > STRUCT_TOL:
        raise BadProbabilities(f"probabilities {probs.tolist()} are not a distribution")
    n = states[0].n_qubits
    if any(s.n_qubits != n for s in states):
        raise DimensionMismatch("ensemble states have differing qubit counts")
    rho = np.zeros((2**n, 2**n), dtype=complex)
    for p, s in zip(probs, states):
        rho += p * density_from_pure(s).matrix
    return DensityOperator(n, rho)


def purity_check(rho: DensityOperator) -> bool:
    m = rho.matrix
    return float(np.max(np.abs(m @ m - m))) <= PURITY_TOL
