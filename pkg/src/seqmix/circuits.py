"""Exact gate compilation of exp(-i*theta*M) for merge operators.

Angle conventions, also stated in exported circuit headers:

    rx(t) = exp(-i t X / 2)        rz(t) = exp(-i t Z / 2)

A multi-qubit Pauli rotation exp(-i (t/2) P), with P a tensor product of
X and Y axes, compiles to a CNOT ladder controlled on the first support
qubit, a central rx(t) on it, and the mirrored ladder; qubits carrying a
Y axis are conjugated by rz(-pi/2) / rz(+pi/2) at the boundaries.  The
Pauli terms of one merge operator commute, so the operator exponential
is the plain product of its term rotations, exact to machine precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import pi

import numpy as np

from .errors import UnknownFormat
from .mixers import MergeOperator, PauliTerm, pauli_decompose

GATE_NAMES = ("cx", "rx", "rz", "h")


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self):
        if self.name not in GATE_NAMES:
            raise ValueError(f"unknown gate {self.name!r}")
        rotational = self.name in ("rx", "rz")
        if rotational != (self.angle is not None):
            raise ValueError(f"gate {self.name} {'requires' if rotational else 'takes no'} angle")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError("gate qubits must be distinct")


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple[Gate, ...]

    def __post_init__(self):
        for gate in self.gates:
            if any(not 0 <= q < self.n_qubits for q in gate.qubits):
                raise ValueError(f"gate {gate} outside register of size {self.n_qubits}")

    def __len__(self) -> int:
        return len(self.gates)


def emit_pauli_rotation(qubits, axes, theta: float, n_qubits: int | None = None) -> Circuit:
    """Circuit for exp(-i (theta/2) P) with P the X/Y product on `qubits`."""
    qubits = tuple(qubits)
    axes = tuple(axes)
    if not qubits:
        raise ValueError("support must be nonempty")
    if len(axes) != len(qubits) or set(axes) - {"X", "Y"}:
        raise ValueError("need one X/Y axis per support qubit")
    n_qubits = max(qubits) + 1 if n_qubits is None else n_qubits

    gates = []
    y_qubits = [q for q, axis in zip(qubits, axes) if axis == "Y"]
    for q in y_qubits:
        gates.append(Gate("rz", (q,), -pi / 2))
    first, rest = qubits[0], qubits[1:]
    for q in reversed(rest):
        gates.append(Gate("cx", (first, q)))
    gates.append(Gate("rx", (first,), theta))
    for q in rest:
        gates.append(Gate("cx", (first, q)))
    for q in y_qubits:
        gates.append(Gate("rz", (q,), pi / 2))
    return Circuit(n_qubits, tuple(gates))


def emit_merge_unitary(op: MergeOperator, theta: float,
                       n_qubits: int | None = None,
                       term_order=None) -> Circuit:
    """Circuit equal to exp(-i*theta*M) as the product of its term rotations.

    Each Pauli term contributes a rotation of angle 2*theta*coefficient;
    `term_order` permutes the (commuting) terms, which cannot change the
    compiled unitary.
    """
    terms = pauli_decompose(op)
    if term_order is not None:
        terms = tuple(terms[i] for i in term_order)
    n_qubits = max(op.support) + 1 if n_qubits is None else n_qubits
    gates = []
    for term in terms:
        block = emit_pauli_rotation(term.qubits, term.axes,
                                    2.0 * theta * term.coefficient, n_qubits)
        gates.extend(block.gates)
    return Circuit(n_qubits, tuple(gates))


_H = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / np.sqrt(2.0)


def _gate_matrix(gate: Gate) -> np.ndarray:
    if gate.name == "rx":
        c, s = np.cos(gate.angle / 2.0), np.sin(gate.angle / 2.0)
        return np.array([[c, -1j * s], [-1j * s, c]])
    if gate.name == "rz":
        return np.diag([np.exp(-1j * gate.angle / 2.0), np.exp(1j * gate.angle / 2.0)])
    if gate.name == "h":
        return _H
    raise ValueError(gate.name)


def _embed_single(u: np.ndarray, q: int, n: int) -> np.ndarray:
    out = np.array([[1.0]], dtype=complex)
    for i in range(n):
        out = np.kron(out, u if i == q else np.eye(2))
    return out


def _embed_cx(control: int, target: int, n: int) -> np.ndarray:
    p0 = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
    p1 = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)
    x = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    keep = np.array([[1.0]], dtype=complex)
    flip = np.array([[1.0]], dtype=complex)
    for i in range(n):
        keep = np.kron(keep, p0 if i == control else np.eye(2))
        flip = np.kron(flip, p1 if i == control else (x if i == target else np.eye(2)))
    return keep + flip


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Dense unitary; qubit 0 is the most significant bit."""
    n = circuit.n_qubits
    out = np.eye(1 << n, dtype=complex)
    for gate in circuit.gates:
        if gate.name == "cx":
            full = _embed_cx(gate.qubits[0], gate.qubits[1], n)
        else:
            full = _embed_single(_gate_matrix(gate), gate.qubits[0], n)
        out = full @ out
    return out


_HEADER = "# seqmix circuit: rx(t)=exp(-i t X/2), rz(t)=exp(-i t Z/2)"


def export_circuit(circuit: Circuit, fmt: str = "qasm-like") -> str:
    """One line per gate: `cx q[i],q[j]` / `rx(angle) q[i]` / `rz(angle) q[i]` / `h q[i]`."""
    if fmt != "qasm-like":
        raise UnknownFormat(f"unsupported format {fmt!r}")
    lines = [_HEADER, f"qubits {circuit.n_qubits}"]
    for gate in circuit.gates:
        args = ",".join(f"q[{q}]" for q in gate.qubits)
        if gate.angle is not None:
            lines.append(f"{gate.name}({gate.angle!r}) {args}")
        else:
            lines.append(f"{gate.name} {args}")
    return "\n".join(lines) + "\n"


def parse_circuit(text: str) -> Circuit:
    """Inverse of :func:`export_circuit`."""
    n_qubits = None
    gates = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("qubits"):
            n_qubits = int(line.split()[1])
            continue
        head, _, args = line.partition(" ")
        name, angle = head, None
        if "(" in head:
            name, payload = head.split("(", 1)
            angle = float(payload.rstrip(")"))
        qubits = tuple(int(tok.strip()[2:-1]) for tok in args.split(","))
        gates.append(Gate(name, qubits, angle))
    if n_qubits is None:
        raise ValueError("missing qubits header")
    return Circuit(n_qubits, tuple(gates))
