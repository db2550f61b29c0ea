"""Gate catalog, circuit model, text format and dense simulation.

Phase gates follow the diagonal convention ``Z_a = diag(1, e^{ia})``: ``S = Z_{pi/2}``,
``T = Z_{pi/4}`` and ``RZ(a) = Z_a``. ``RX(a) = H Z_a H``. The alternative
forms ``e^{i pi/2} Z`` / ``e^{i pi/4} Z`` seen in some circuit drawings differ
from these by a global phase only.

Text format::

    qubits <n>
    <GATE> [<num>/<den>] <targets...>

Angles (only for RZ/RX) are rational multiples of pi. ``#`` starts a comment line.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

import numpy as np

from .errors import IndexOutOfRange, ParseError, TooLarge
from .qcore import HADAMARD, PAULI_X, PAULI_Y, PAULI_Z, StateVector

MAX_QUBITS = 12

ARITY = {
    "X": 1, "Y": 1, "Z": 1, "H": 1, "S": 1, "T": 1, "SD": 1, "TD": 1,
    "RZ": 1, "RX": 1, "CNOT": 2, "CCNOT": 3,
}
ANGLED = {"RZ", "RX"}
# fixed phase gates as multiples of pi
PHASE_GATES = {"S": Fraction(1, 2), "T": Fraction(1, 4),
               "SD": Fraction(-1, 2), "TD": Fraction(-1, 4)}


def phase_matrix(angle: Fraction) -> np.ndarray:
    return np.diag([1.0, np.exp(1j * np.pi * float(angle))]).astype(complex)


@dataclass(frozen=True)
class Gate:
    kind: str
    targets: tuple[int, ...]
    angle: Fraction | None = None

    def __post_init__(self):
        if self.kind not in ARITY:
            raise ValueError(f"unknown gate {self.kind!r}")
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        if len(self.targets) != ARITY[self.kind]:
            raise ValueError(f"{self.kind} takes {ARITY[self.kind]} targets, got {len(self.targets)}")
        if len(set(self.targets)) != len(self.targets):
            raise ValueError(f"{self.kind} targets must be distinct: {self.targets}")
        if any(t < 0 for t in self.targets):
            raise ValueError("negative target index")
        if self.kind in ANGLED:
            if self.angle is None:
                raise ValueError(f"{self.kind} needs an angle")
            object.__setattr__(self, "angle", Fraction(self.angle))
        elif self.angle is not None:
            raise ValueError(f"{self.kind} takes no angle")

    @property
    def phase(self) -> Fraction | None:
        """Phase (multiple of pi) of the diagonal form, for phase-type gates."""
        if self.kind == "RZ" or self.kind == "RX":
            return self.angle
        return PHASE_GATES.get(self.kind, Fraction(1) if self.kind in ("Z", "X") else None)

    def matrix(self) -> np.ndarray:
        """Matrix on the gate's own qubits, in target order."""
        k = self.kind
        if k == "X":
            return PAULI_X.copy()
        if k == "Y":
            return PAULI_Y.copy()
        if k == "Z":
            return PAULI_Z.copy()
        if k == "H":
            return HADAMARD.copy()
        if k in PHASE_GATES:
            return phase_matrix(PHASE_GATES[k])
        if k == "RZ":
            return phase_matrix(self.angle)
        if k == "RX":
            return HADAMARD @ phase_matrix(self.angle) @ HADAMARD
        if k == "CNOT":
            u = np.eye(4, dtype=complex)
            u[[2, 3]] = u[[3, 2]]
            return u
        if k == "CCNOT":
            u = np.eye(8, dtype=complex)
            u[[6, 7]] = u[[7, 6]]
            return u
        raise AssertionError(k)

    def __str__(self):
        parts = [self.kind]
        if self.angle is not None:
            parts.append(f"{self.angle.numerator}/{self.angle.denominator}")
        parts.extend(str(t) for t in self.targets)
        return " ".join(parts)


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("a circuit needs at least one qubit")
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if max(g.targets) >= self.n_qubits:
                raise IndexOutOfRange(f"{g} targets a qubit >= {self.n_qubits}")

    def __len__(self):
        return len(self.gates)


def parse_circuit(text: str) -> Circuit:
    n_qubits = None
    gates = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if n_qubits is None:
            if tokens[0] != "qubits" or len(tokens) != 2:
                raise ParseError("expected 'qubits <n>' header", lineno)
            n_qubits = _parse_int(tokens[1], lineno)
            if n_qubits < 1:
                raise ParseError("qubit count must be positive", lineno)
            continue
        kind, args = tokens[0], tokens[1:]
        if kind not in ARITY:
            raise ParseError(f"unknown gate {kind!r}", lineno)
        angle = None
        if kind in ANGLED:
            if not args:
                raise ParseError(f"{kind} needs an angle num/den", lineno)
            angle = _parse_angle(args[0], lineno)
            args = args[1:]
        if len(args) != ARITY[kind]:
            raise ParseError(f"{kind} takes {ARITY[kind]} targets, got {len(args)}", lineno)
        targets = tuple(_parse_int(a, lineno) for a in args)
        for t in targets:
            if t < 0 or t >= n_qubits:
                raise IndexOutOfRange(f"qubit {t} out of range for {n_qubits} qubits", lineno)
        if len(set(targets)) != len(targets):
            raise ParseError(f"repeated target in {line!r}", lineno)
        gates.append(Gate(kind, targets, angle))
    if n_qubits is None:
        raise ParseError("missing 'qubits <n>' header", 1)
    return Circuit(n_qubits, tuple(gates))


def _parse_int(token, lineno):
    if not token.lstrip("-").isdigit():
        raise ParseError(f"expected an integer, got {token!r}", lineno)
    return int(token)


def _parse_angle(token, lineno):
    num, sep, den = token.partition("/")
    if not sep:
        raise ParseError(f"angle must be num/den, got {token!r}", lineno)
    num, den = _parse_int(num, lineno), _parse_int(den, lineno)
    if den <= 0:
        raise ParseError("angle denominator must be positive", lineno)
    return Fraction(num, den)


def unparse_circuit(c: Circuit) -> str:
    lines = [f"qubits {c.n_qubits}"]
    lines.extend(str(g) for g in c.gates)
    return "\n".join(lines) + "\n"


def load_circuit(path) -> Circuit:
    with open(path, encoding="utf-8") as fh:
        return parse_circuit(fh.read())


def golden_ccnot() -> Circuit:
    """The fixed Clifford+T decomposition of CCNOT on qubits (0, 1; 2)."""
    text = resources.files("zxforge").joinpath("data/ccnot.qc").read_text(encoding="utf-8")
    return parse_circuit(text)


def expand_ccnot(c: Circuit) -> Circuit:
    """Replace every CCNOT by the golden decomposition on its targets."""
    golden = golden_ccnot()
    gates = []
    for g in c.gates:
        if g.kind != "CCNOT":
            gates.append(g)
            continue
        remap = dict(enumerate(g.targets))
        for h in golden.gates:
            gates.append(Gate(h.kind, tuple(remap[t] for t in h.targets), h.angle))
    return Circuit(c.n_qubits, tuple(gates))


def _apply(tensor: np.ndarray, g: Gate, n: int) -> np.ndarray:
    # tensor has 2**n leading row axes, one trailing column axis
    k = len(g.targets)
    u = g.matrix().reshape((2,) * (2 * k))
    out = np.tensordot(u, tensor, axes=(list(range(k, 2 * k)), list(g.targets)))
    return np.moveaxis(out, list(range(k)), list(g.targets))


def gate_matrix(g: Gate, n_qubits: int) -> np.ndarray:
    """The ``2**n x 2**n`` unitary acting as ``g`` on its targets and identity elsewhere."""
    if max(g.targets) >= n_qubits:
        raise IndexOutOfRange(f"{g} does not fit on {n_qubits} qubits")
    dim = 2**n_qubits
    t = np.eye(dim, dtype=complex).reshape((2,) * n_qubits + (dim,))
    return _apply(t, g, n_qubits).reshape(dim, dim)


def circuit_unitary(c: Circuit) -> np.ndarray:
    """Product of the gate matrices, first gate acting first."""
    n = c.n_qubits
    if n > MAX_QUBITS:
        raise TooLarge(f"{n} qubits exceeds the dense cap of {MAX_QUBITS}")
    dim = 2**n
    t = np.eye(dim, dtype=complex).reshape((2,) * n + (dim,))
    for g in c.gates:
        t = _apply(t, g, n)
    return t.reshape(dim, dim)


def apply_circuit(c: Circuit, state: StateVector) -> StateVector:
    n = c.n_qubits
    if state.n_qubits != n:
        raise ValueError(f"state has {state.n_qubits} qubits, circuit has {n}")
    if n > MAX_QUBITS:
        raise TooLarge(f"{n} qubits exceeds the dense cap of {MAX_QUBITS}")
    t = np.array(state.amplitudes).reshape((2,) * n + (1,))
    for g in c.gates:
        t = _apply(t, g, n)
    return StateVector(n, t.reshape(-1))


@dataclass(frozen=True)
class CloningReport:
    fidelities: dict
    copies_exact: dict

    @property
    def basis_copied(self) -> bool:
        return self.copies_exact["0"] and self.copies_exact["1"]

    @property
    def superposition_copied(self) -> bool:
        return self.copies_exact["+"]


def cloning_counterexample(tol: float = 1e-12) -> CloningReport:
    """Try to copy |0>, |1> and |+> with CNOT (source = control, blank |0> target)."""
    from .qcore import KET0, KET1, KET_PLUS

    cnot = Circuit(2, (Gate("CNOT", (0, 1)),))
    fidelities, exact = {}, {}
    for label, ket in (("0", KET0), ("1", KET1), ("+", KET_PLUS)):
        src = StateVector(1, ket)
        out = apply_circuit(cnot, src.tensor(StateVector.basis("0")))
        ideal = src.tensor(src)
        f = abs(ideal.inner(out)) ** 2
        fidelities[label] = f
        exact[label] = abs(f - 1.0) <= tol
    return CloningReport(fidelities, exact)
