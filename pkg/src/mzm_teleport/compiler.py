"""Braid words, encoders and the teleportation program compiled to native gates.

Gates are stored in execution order. Operator products written right to left
are reversed when they are turned into a gate list.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .pauli import BraidGenerator, PauliString, braid_spin_rep, edge
from .state import GateOp, apply_gate, cz, gphase, h, rx, ry, rz

HALF_PI = math.pi / 2
QUARTER_PI = math.pi / 4

ROLES = ("syndrome", "correction", "ancilla", "tomography")


@dataclass(frozen=True)
class CircuitIR:
    n_qubits: int
    gates: tuple[GateOp, ...]
    measurements: dict[int, str] = field(default_factory=dict)
    label: str = ""
    # gate indices where concatenated blocks meet
    seams: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "seams", tuple(sorted(set(self.seams))))
        if any(not 0 < k < len(self.gates) for k in self.seams):
            raise ValueError("seams must fall strictly inside the gate list")
        for g in self.gates:
            for q in g.touched():
                if not 1 <= q <= self.n_qubits:
                    raise ValueError(f"{g.to_text()} touches qubit outside 1..{self.n_qubits}")
        for q, role in self.measurements.items():
            if role not in ROLES:
                raise ValueError(f"unknown measurement role {role!r}")
            if not 1 <= q <= self.n_qubits:
                raise ValueError(f"measured qubit {q} out of range")

    def __add__(self, other: "CircuitIR") -> "CircuitIR":
        if other.n_qubits != self.n_qubits:
            raise ValueError("cannot concatenate circuits of different widths")
        clash = set(self.measurements) & set(other.measurements)
        if any(self.measurements[q] != other.measurements[q] for q in clash):
            raise ValueError(f"conflicting measurement roles on {sorted(clash)}")
        label = "+".join(x for x in (self.label, other.label) if x)
        k = len(self.gates)
        seams = self.seams + (k,) + tuple(k + j for j in other.seams)
        gates = self.gates + other.gates
        seams = tuple(j for j in seams if 0 < j < len(gates))
        return CircuitIR(self.n_qubits, gates, {**self.measurements, **other.measurements}, label, seams)

    def count(self, kind: str) -> int:
        return sum(1 for g in self.gates if g.kind == kind)

    def unitary(self) -> np.ndarray:
        """Dense unitary, global phases included."""
        dim = 2 ** self.n_qubits
        cols = np.eye(dim, dtype=complex).reshape((2,) * self.n_qubits + (dim,))
        for g in self.gates:
            cols = apply_gate(cols, g, self.n_qubits)
        return cols.reshape(dim, dim)

    def layers(self) -> list[list[GateOp]]:
        """As-soon-as-possible moments; global phases join the current layer."""
        frontier = [0] * (self.n_qubits + 1)
        out: list[list[GateOp]] = []
        for g in self.gates:
            qs = g.touched()
            if not qs:
                if not out:
                    out.append([])
                out[-1].append(g)
                continue
            depth = max(frontier[q] for q in qs)
            if depth == len(out):
                out.append([])
            out[depth].append(g)
            for q in qs:
                frontier[q] = depth + 1
        return out

    def to_text(self) -> str:
        lines = [f"QUBITS {self.n_qubits}"]
        lines += [g.to_text() for g in self.gates]
        lines += [f"MEASURE q{q} {role}" for q, role in sorted(self.measurements.items())]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, label: str = "") -> "CircuitIR":
        n = None
        gates, meas = [], {}
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("QUBITS"):
                n = int(line.split()[1])
            elif line.startswith("MEASURE"):
                _, q, role = line.split()
                meas[int(q[1:])] = role
            else:
                gates.append(GateOp.from_text(line))
        if n is None:
            raise ValueError("missing QUBITS header")
        return cls(n, tuple(gates), meas, label)


def _relabel(gates: Iterable[GateOp], mapping: dict[int, int]) -> list[GateOp]:
    return [GateOp(g.kind, tuple(mapping[q] for q in g.qubits), g.angle, g.pauli) for g in gates]


# -- two-qubit interaction via CZ ------------------------------------------

def _zz_quarter_turn(a: int, b: int, sign: int) -> list[GateOp]:
    """``exp(sign * i pi/4 Z_a Z_b)`` from one CZ.

    Uses ``CZ = e^{i pi/4} exp(-i pi/4 Z_a) exp(-i pi/4 Z_b) exp(i pi/4 Z_a Z_b)``.
    """
    return [cz(a, b), rz(a, sign * HALF_PI), rz(b, sign * HALF_PI), gphase(-sign * QUARTER_PI)]


def _same_axis_pair(axis: str, a: int, b: int, sign: int) -> list[GateOp]:
    """``exp(sign * i pi/4 s_a s_b)`` for ``s`` in {X, Y}: rotate into ZZ and back."""
    if axis == "X":
        pre, post = [ry(a, -HALF_PI), ry(b, -HALF_PI)], [ry(a, HALF_PI), ry(b, HALF_PI)]
    elif axis == "Y":
        pre, post = [rx(a, -HALF_PI), rx(b, -HALF_PI)], [rx(a, HALF_PI), rx(b, HALF_PI)]
    else:
        pre, post = [], []
    core = _zz_quarter_turn(a, b, sign)
    # global phase goes last
    return pre + core[:1] + core[1:3] + post + core[3:]


def _to_z_basis(axis: str, q: int) -> tuple[list[GateOp], list[GateOp]]:
    """Rotations ``(W, W^dagger)`` with ``W sigma W^dagger = Z``."""
    if axis == "X":
        return [ry(q, HALF_PI)], [ry(q, -HALF_PI)]
    if axis == "Y":
        return [rx(q, -HALF_PI)], [rx(q, HALF_PI)]
    return [], []


def _cnot(c: int, t: int) -> list[GateOp]:
    return [h(t), cz(c, t), h(t)]


def pauli_exponential(p: PauliString, sign: int) -> list[GateOp]:
    """``exp(sign * i pi/4 P)`` for a phase-free Pauli string ``P``.

    Each factor is rotated into Z, the parity is collected with a CNOT ladder
    onto the last qubit, and one Z rotation by ``sign*pi/2`` is applied there.
    """
    if p.phase != 0:
        raise ValueError("pauli_exponential expects a phase-free string")
    support = p.support
    if not support:
        return [gphase(sign * QUARTER_PI)]
    pre, post = [], []
    for q in support:
        w, wd = _to_z_basis(p.factors[q - 1], q)
        pre += w
        post += wd
    ladder = []
    for c, t in zip(support, support[1:]):
        ladder += _cnot(c, t)
    return pre + ladder + [rz(support[-1], sign * HALF_PI)] + ladder[::-1] + post


def compile_braid(g: BraidGenerator, n_sites: int = 2, n_chains: int = 2,
                  offset: int = 0) -> CircuitIR:
    """Native gates for ``(1 + sP)/sqrt(2) = exp(s' i pi/4 P)`` where ``sP = s' i P``.

    Nearest-neighbour ``XX`` and ``YY`` interactions use the single-CZ
    decomposition; other strings fall back to a CNOT parity ladder.
    ``offset`` shifts every qubit index, placing the circuit inside a larger
    register of ``n_sites * n_chains + offset`` qubits.
    """
    if n_sites != 2:
        raise ValueError(f"braid compilation is only defined for N=2, got N={n_sites}")
    s, p = braid_spin_rep(g, n_sites, n_chains)
    sign = 1 if s == 1 else -1
    support = p.support
    axes = {p.factors[q - 1] for q in support}
    if len(support) == 2 and support[1] == support[0] + 1 and axes <= {"X", "Y"} and len(axes) == 1:
        gates = _same_axis_pair(axes.pop(), support[0], support[1], sign)
    else:
        gates = pauli_exponential(p, sign)
    n = n_sites * n_chains
    if offset:
        gates = _relabel(gates, {q: q + offset for q in range(1, n + 1)})
    return CircuitIR(n + offset, tuple(gates), label=str(g))


def compile_word(word: Sequence[BraidGenerator], n_sites: int = 2, n_chains: int = 2) -> CircuitIR:
    if not word:
        raise ValueError("empty braid word")
    out = compile_braid(word[0], n_sites, n_chains)
    for g in word[1:]:
        out = out + compile_braid(g, n_sites, n_chains)
    return out


# -- encoder / decoder -----------------------------------------------------

def encoder_circuit(a: int, b: int, n_qubits: int | None = None) -> CircuitIR:
    """``U_enc = H_b CZ_ab H_a H_b``: ``|0>_a (x|0>+y|1>)_b -> x|0_L> + y|1_L>``."""
    if a == b:
        raise ValueError("encoder needs two distinct qubits")
    n = n_qubits or max(a, b)
    return CircuitIR(n, (h(b), h(a), cz(a, b), h(b)), label=f"enc({a},{b})")


def decoder_circuit(a: int, b: int, variant: str = "standard",
                    n_qubits: int | None = None) -> CircuitIR:
    """Standard ``H_a H_b CZ_ab H_b`` (inverse encoder) or modified ``H_a CZ_ab H_b``.

    The modified form sends ``|+_L> = |++>`` to ``|00>``.
    """
    if a == b:
        raise ValueError("decoder needs two distinct qubits")
    n = n_qubits or max(a, b)
    if variant == "standard":
        gates = (h(b), cz(a, b), h(b), h(a))
    elif variant == "modified":
        gates = (h(b), cz(a, b), h(a))
    else:
        raise ValueError(f"unknown decoder variant {variant!r}")
    return CircuitIR(n, gates, label=f"dec_{variant}({a},{b})")


# -- teleportation program -------------------------------------------------

TELEPORT_QUBITS = 8
CHAINS = ((1, 2), (3, 4), (5, 6), (7, 8))
VARIANTS = ("none", "X", "Z", "XZ")


def _braid8(chain_a: int, side_a: str, chain_b: int, side_b: str) -> CircuitIR:
    g = BraidGenerator(edge(chain_a, side_a), edge(chain_b, side_b))
    return compile_braid(g, 2, 4)


def sqrt_xx(chain_a: int, chain_b: int) -> CircuitIR:
    """Braid the right mode of ``chain_a`` with the left mode of ``chain_b = chain_a+1``."""
    return _braid8(chain_a, "r", chain_b, "l")


def sqrt_z(chain: int) -> CircuitIR:
    return _braid8(chain, "l", chain, "r")


def _measure(n: int, roles: dict[int, str]) -> CircuitIR:
    return CircuitIR(n, (), roles)


def teleport_prefix() -> CircuitIR:
    """Encode, entangle chains 2-3, braid chains 1-2, decode chains 1 and 2."""
    n = TELEPORT_QUBITS
    prog = encoder_circuit(1, 2, n) + encoder_circuit(3, 4, n) + encoder_circuit(5, 6, n)
    prog = prog + CircuitIR(n, (h(7), h(8)), label="ancilla(|+_L>)")
    prog = prog + sqrt_xx(2, 3) + sqrt_xx(1, 2)
    prog = prog + decoder_circuit(1, 2, "standard", n) + decoder_circuit(3, 4, "standard", n)
    return prog + _measure(n, {1: "syndrome", 2: "correction", 3: "syndrome", 4: "correction"})


def correction_circuit(variant: str) -> CircuitIR:
    """Logical X3 = two sqrt(X3X4) braids, Z3 = two sqrt(Z3) braids; X runs first."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown correction variant {variant!r}")
    prog = CircuitIR(TELEPORT_QUBITS, (), label=f"correct[{variant}]")
    if "X" in variant:
        prog = prog + sqrt_xx(3, 4) + sqrt_xx(3, 4)
    if "Z" in variant:
        prog = prog + sqrt_z(3) + sqrt_z(3)
    return prog


def teleport_suffix() -> CircuitIR:
    n = TELEPORT_QUBITS
    prog = decoder_circuit(5, 6, "standard", n) + decoder_circuit(7, 8, "modified", n)
    return prog + _measure(n, {5: "syndrome", 6: "tomography", 7: "syndrome", 8: "ancilla"})


def compile_teleport_program(variant: str = "none") -> CircuitIR:
    """Full 8-qubit program for one correction variant.

    Qubit 2 is expected to hold the input state before the program starts.
    """
    prog = teleport_prefix() + correction_circuit(variant) + teleport_suffix()
    return CircuitIR(prog.n_qubits, prog.gates, prog.measurements, f"teleport[{variant}]", prog.seams)


def correction_for(c1: int, c2: int) -> str:
    """Correction variant for measured logical values of chains 1 and 2."""
    table = {(0, 0): "Z", (0, 1): "X", (1, 0): "XZ", (1, 1): "none"}
    try:
        return table[(c1, c2)]
    except KeyError:
        raise ValueError(f"bits must be 0 or 1, got {(c1, c2)}") from None
