"""Dense state-vector and density-matrix numerics.

Qubits are 1-based and qubit 1 is the most significant bit of an amplitude
index, i.e. axis 0 of the ``(2,)*n`` tensor view.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .pauli import SINGLE_QUBIT, PauliString

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
CZ = np.diag([1, 1, 1, -1]).astype(complex)

GATE_KINDS = ("RX", "RY", "RZ", "CZ", "H", "PAULI", "GPHASE")


def rotation(axis: str, angle: float) -> np.ndarray:
    """``R(theta) = exp(+i sigma theta / 2)``."""
    sigma = SINGLE_QUBIT[axis.upper()]
    return math.cos(angle / 2) * np.eye(2, dtype=complex) + 1j * math.sin(angle / 2) * sigma


@dataclass(frozen=True)
class GateOp:
    """One native instruction.

    kind is one of ``RX RY RZ`` (``angle`` in radians on ``qubits[0]``),
    ``CZ`` (``qubits = (control, target)``), ``H``, ``PAULI`` (``pauli`` set)
    or ``GPHASE`` (multiplies the state by ``exp(i angle)``).
    """

    kind: str
    qubits: tuple[int, ...] = ()
    angle: float = 0.0
    pauli: PauliString | None = None

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if not math.isfinite(self.angle):
            raise ValueError(f"non-finite angle in {self.kind}")
        want = {"CZ": 2, "GPHASE": 0, "PAULI": 0}.get(self.kind, 1)
        if len(self.qubits) != want:
            raise ValueError(f"{self.kind} takes {want} qubits, got {self.qubits}")
        if self.kind == "CZ" and self.qubits[0] == self.qubits[1]:
            raise ValueError("CZ needs two distinct qubits")
        if self.kind == "PAULI" and self.pauli is None:
            raise ValueError("PAULI gate without a PauliString")

    def touched(self) -> tuple[int, ...]:
        if self.kind == "PAULI":
            return self.pauli.support
        return self.qubits

    def to_text(self) -> str:
        if self.kind in ("RX", "RY", "RZ"):
            return f"{self.kind} q{self.qubits[0]} {self.angle!r}"
        if self.kind == "CZ":
            return f"CZ q{self.qubits[0]} q{self.qubits[1]}"
        if self.kind == "H":
            return f"H q{self.qubits[0]}"
        if self.kind == "PAULI":
            return f"PAULI {self.pauli}"
        return f"GPHASE {self.angle!r}"

    @classmethod
    def from_text(cls, line: str) -> "GateOp":
        parts = line.split()
        kind = parts[0]

        def q(token: str) -> int:
            if not token.startswith("q"):
                raise ValueError(f"bad qubit token {token!r} in {line!r}")
            return int(token[1:])

        if kind in ("RX", "RY", "RZ"):
            return cls(kind, (q(parts[1]),), float(parts[2]))
        if kind == "CZ":
            return cls(kind, (q(parts[1]), q(parts[2])))
        if kind == "H":
            return cls(kind, (q(parts[1]),))
        if kind == "PAULI":
            return cls(kind, pauli=PauliString.parse(parts[1]))
        if kind == "GPHASE":
            return cls(kind, angle=float(parts[1]))
        raise ValueError(f"unknown instruction {line!r}")


def rx(q: int, angle: float) -> GateOp:
    return GateOp("RX", (q,), angle)


def ry(q: int, angle: float) -> GateOp:
    return GateOp("RY", (q,), angle)


def rz(q: int, angle: float) -> GateOp:
    return GateOp("RZ", (q,), angle)


def h(q: int) -> GateOp:
    return GateOp("H", (q,))


def cz(control: int, target: int) -> GateOp:
    return GateOp("CZ", (control, target))


def gphase(angle: float) -> GateOp:
    return GateOp("GPHASE", angle=angle)


def pauli_gate(p: PauliString) -> GateOp:
    return GateOp("PAULI", pauli=p)


# -- tensor kernels --------------------------------------------------------
# ``psi`` has shape (2,)*n + batch; batch axes trail and are left untouched.

def apply_1q(psi: np.ndarray, mat: np.ndarray, axis: int) -> np.ndarray:
    out = np.tensordot(mat, psi, axes=([1], [axis]))
    return np.moveaxis(out, 0, axis)


def apply_cz(psi: np.ndarray, a: int, b: int) -> np.ndarray:
    out = psi.copy()
    idx = [slice(None)] * psi.ndim
    idx[a] = 1
    idx[b] = 1
    out[tuple(idx)] *= -1
    return out


def apply_pauli(psi: np.ndarray, p: PauliString) -> np.ndarray:
    out = psi
    for i, f in enumerate(p.factors):
        if f != "I":
            out = apply_1q(out, SINGLE_QUBIT[f], i)
    return p.coefficient * out


def apply_gate(psi: np.ndarray, gate: GateOp, n_qubits: int) -> np.ndarray:
    for q in gate.touched():
        if not 1 <= q <= n_qubits:
            raise IndexError(f"qubit {q} out of range 1..{n_qubits}")
    kind = gate.kind
    if kind == "CZ":
        return apply_cz(psi, gate.qubits[0] - 1, gate.qubits[1] - 1)
    if kind == "H":
        return apply_1q(psi, HADAMARD, gate.qubits[0] - 1)
    if kind == "PAULI":
        if gate.pauli.n_qubits != n_qubits:
            raise ValueError("Pauli gate length differs from register size")
        return apply_pauli(psi, gate.pauli)
    if kind == "GPHASE":
        return np.exp(1j * gate.angle) * psi
    return apply_1q(psi, rotation(kind[1], gate.angle), gate.qubits[0] - 1)


@dataclass
class StateVector:
    """``2**n`` amplitudes; may be unnormalized after projection."""

    n_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if self.amplitudes.size != 2 ** self.n_qubits:
            raise ValueError(f"need {2 ** self.n_qubits} amplitudes, got {self.amplitudes.size}")

    @classmethod
    def zeros(cls, n_qubits: int) -> "StateVector":
        amps = np.zeros(2 ** n_qubits, dtype=complex)
        amps[0] = 1
        return cls(n_qubits, amps)

    @classmethod
    def product(cls, singles: Sequence[Sequence[complex]]) -> "StateVector":
        """Tensor product of one-qubit states, qubit 1 first."""
        amps = np.array([1], dtype=complex)
        for s in singles:
            amps = np.kron(amps, np.asarray(s, dtype=complex))
        return cls(len(singles), amps)

    @classmethod
    def from_label(cls, bits: str) -> "StateVector":
        """Computational basis state, e.g. ``"011"``."""
        amps = np.zeros(2 ** len(bits), dtype=complex)
        amps[int(bits, 2)] = 1
        return cls(len(bits), amps)

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.n_qubits)

    def norm2(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes.copy())

    def kron(self, other: "StateVector") -> "StateVector":
        return StateVector(self.n_qubits + other.n_qubits, np.kron(self.amplitudes, other.amplitudes))

    def density(self) -> "DensityMatrix":
        return DensityMatrix(self.n_qubits, np.outer(self.amplitudes, self.amplitudes.conj()))


def _check_qubit(q: int, n: int) -> None:
    if not 1 <= q <= n:
        raise IndexError(f"qubit {q} out of range 1..{n}")


def apply(state: StateVector, gate: GateOp) -> StateVector:
    out = apply_gate(state.tensor(), gate, state.n_qubits)
    return StateVector(state.n_qubits, out.reshape(-1))


def run(state: StateVector, gates: Iterable[GateOp]) -> StateVector:
    psi = state.tensor()
    for g in gates:
        psi = apply_gate(psi, g, state.n_qubits)
    return StateVector(state.n_qubits, psi.reshape(-1))


def project(state: StateVector, qubit: int, outcome: int) -> StateVector:
    """Apply ``|outcome><outcome|`` on ``qubit``; no renormalisation."""
    _check_qubit(qubit, state.n_qubits)
    if outcome not in (0, 1):
        raise ValueError(f"outcome must be 0 or 1, got {outcome}")
    psi = state.tensor().copy()
    idx = [slice(None)] * state.n_qubits
    idx[qubit - 1] = 1 - outcome
    psi[tuple(idx)] = 0
    return StateVector(state.n_qubits, psi.reshape(-1))


def expectation(state: StateVector, p: PauliString) -> float:
    if not p.is_hermitian:
        raise ValueError(f"{p} is not Hermitian")
    if p.n_qubits != state.n_qubits:
        raise ValueError("Pauli length differs from register size")
    moved = apply_pauli(state.tensor(), p).reshape(-1)
    return float(np.vdot(state.amplitudes, moved).real)


@dataclass
class DensityMatrix:
    n_qubits: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)
        dim = 2 ** self.n_qubits
        if self.matrix.shape != (dim, dim):
            raise ValueError(f"need a {dim}x{dim} matrix, got {self.matrix.shape}")

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def normalized(self) -> "DensityMatrix":
        tr = self.trace()
        if tr <= 0:
            raise ValueError("cannot normalise a zero-trace density matrix")
        return DensityMatrix(self.n_qubits, self.matrix / tr)

    def is_valid(self, tol: float = 1e-9) -> bool:
        m = self.matrix
        if not np.allclose(m, m.conj().T, atol=tol):
            return False
        tr = self.trace()
        if tr < -tol or tr > 1 + tol:
            return False
        return bool(np.linalg.eigvalsh((m + m.conj().T) / 2).min() >= -tol)

    def to_dict(self) -> dict:
        return {
            "n_qubits": self.n_qubits,
            "real": self.matrix.real.tolist(),
            "imag": self.matrix.imag.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DensityMatrix":
        m = np.asarray(data["real"], dtype=float) + 1j * np.asarray(data["imag"], dtype=float)
        return cls(int(data["n_qubits"]), m)

    def dumps(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def loads(cls, text: str) -> "DensityMatrix":
        return cls.from_dict(json.loads(text))


def partial_trace(rho: DensityMatrix | StateVector, keep: Iterable[int]) -> DensityMatrix:
    """Reduced state on the (1-based, sorted) qubits in ``keep``."""
    if isinstance(rho, StateVector):
        return reduced_from_vector(rho, keep)
    n = rho.n_qubits
    keep = sorted(set(keep))
    if not keep:
        raise ValueError("keep set is empty")
    for q in keep:
        _check_qubit(q, n)
    letters = "abcdefghijklmnopqrstuvwxyz"
    if 2 * n > len(letters) * 2:
        raise ValueError("register too large")
    rows = list(letters[:n])
    cols = [c.upper() for c in rows]
    out_r, out_c = [], []
    for i in range(n):
        if i + 1 in keep:
            out_r.append(rows[i])
            out_c.append(cols[i])
        else:
            cols[i] = rows[i]
    spec = "".join(rows) + "".join(cols) + "->" + "".join(out_r) + "".join(out_c)
    t = np.einsum(spec, rho.matrix.reshape((2,) * (2 * n)))
    dim = 2 ** len(keep)
    return DensityMatrix(len(keep), t.reshape(dim, dim))


def reduced_from_vector(state: StateVector, keep: Iterable[int]) -> DensityMatrix:
    """Partial trace of ``|psi><psi|`` without forming the full outer product."""
    n = state.n_qubits
    keep = sorted(set(keep))
    if not keep:
        raise ValueError("keep set is empty")
    for q in keep:
        _check_qubit(q, n)
    axes = [q - 1 for q in keep]
    rest = [i for i in range(n) if i not in axes]
    t = np.transpose(state.tensor(), axes + rest).reshape(2 ** len(keep), -1)
    return DensityMatrix(len(keep), t @ t.conj().T)
