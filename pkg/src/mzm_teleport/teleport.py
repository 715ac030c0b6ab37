"""Teleportation of an MZM-encoded qubit: execution, branch enumeration, postselection.

Register layout: chains (1,2), (3,4), (5,6), (7,8). The input sits on qubit 2,
qubits 2 and 4 carry the measured logical values of chains 1 and 2, qubits
1, 3, 5, 7 are syndromes, qubit 8 is the ancilla readout and qubit 6 receives
the teleported state.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .compiler import (
    TELEPORT_QUBITS,
    VARIANTS,
    correction_circuit,
    correction_for,
    teleport_prefix,
    teleport_suffix,
)
from .noise import NoiseParams, apply_dephasing, jitter
from .state import DensityMatrix, GateOp, apply_gate

N_QUBITS = TELEPORT_QUBITS
CORRECTION_QUBITS = (2, 4)
SYNDROME_QUBITS = (1, 3, 5, 7)
ANCILLA_QUBIT = 8
OUTPUT_QUBIT = 6
INPUT_QUBIT = 2

_S = 1 / math.sqrt(2)
NAMED_STATES = {
    "0": (1, 0),
    "1": (0, 1),
    "+": (_S, _S),
    "-": (_S, -_S),
    "+i": (_S, 1j * _S),
    "-i": (_S, -1j * _S),
}
SIX_STATES = ("0", "1", "+", "-", "+i", "-i")


@dataclass(frozen=True)
class InputStateSpec:
    alpha: complex
    beta: complex
    label: str = ""

    def __post_init__(self):
        norm = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm - 1) > 1e-9:
            raise ValueError(f"input state not normalised (|a|^2+|b|^2 = {norm})")

    @classmethod
    def parse(cls, label: str) -> "InputStateSpec":
        key = label.strip().strip("|>").strip()
        if key not in NAMED_STATES:
            raise ValueError(f"unknown input state {label!r}; choose from {SIX_STATES}")
        a, b = NAMED_STATES[key]
        return cls(complex(a), complex(b), key)

    @classmethod
    def random(cls, rng: np.random.Generator) -> "InputStateSpec":
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        v /= np.linalg.norm(v)
        return cls(complex(v[0]), complex(v[1]), "random")

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([self.alpha, self.beta], dtype=complex)

    @property
    def display(self) -> str:
        return f"|{self.label}>" if self.label and self.label != "random" else f"({self.alpha:.4g}, {self.beta:.4g})"


@dataclass(frozen=True)
class PostselectPolicy:
    """``NS`` keeps every branch; ``ES`` keeps only all-zero syndromes. The ancilla is never filtered."""

    mode: str = "NS"

    def __post_init__(self):
        if self.mode not in ("NS", "ES"):
            raise ValueError(f"unknown postselection mode {self.mode!r}")

    def keeps(self, syndrome: Sequence[int]) -> bool:
        return self.mode == "NS" or not any(syndrome)


NS = PostselectPolicy("NS")
ES = PostselectPolicy("ES")


@dataclass
class RunOutcome:
    correction: tuple[int, int]
    syndrome: tuple[int, int, int, int]
    ancilla: int
    rho: np.ndarray = field(repr=False)

    @property
    def probability(self) -> float:
        return float(np.trace(self.rho).real)


@dataclass
class TeleportProgram:
    """A (possibly noisy) realisation: shared prefix, then one suffix per correction variant."""

    prefix: list[GateOp]
    suffixes: dict[str, list[GateOp]]
    # block boundaries inside the prefix, used to place midpoint dephasing
    seams: tuple[int, ...] = ()


def ideal_program() -> TeleportProgram:
    suffix = teleport_suffix().gates
    prefix = teleport_prefix()
    return TeleportProgram(
        list(prefix.gates),
        {v: list(correction_circuit(v).gates + suffix) for v in VARIANTS},
        prefix.seams,
    )


def realize(program: TeleportProgram, params: NoiseParams, rng: np.random.Generator) -> TeleportProgram:
    """Jitter every gate; dephasing pulses go into the shared prefix only."""
    prefix = apply_dephasing(program.prefix, N_QUBITS, params, rng, program.seams,
                             transform=lambda seg: jitter(seg, params, rng))
    suffixes = {v: jitter(program.suffixes[v], params, rng) for v in VARIANTS}
    return TeleportProgram(prefix, suffixes)


def inject(program: TeleportProgram, position: int, gate: GateOp) -> TeleportProgram:
    """Insert ``gate`` before prefix position ``position`` (``len(prefix)`` appends)."""
    prefix = list(program.prefix)
    prefix.insert(position, gate)
    seams = tuple(k + (k >= position) for k in program.seams if 0 < k + (k >= position) < len(prefix))
    return TeleportProgram(prefix, {v: list(s) for v, s in program.suffixes.items()}, seams)


# -- execution -------------------------------------------------------------

def _basis_inputs() -> np.ndarray:
    """``(2,)*8 + (2,)``: batch index b puts ``|b>`` on the input qubit."""
    psi = np.zeros((2,) * N_QUBITS + (2,), dtype=complex)
    for b in (0, 1):
        idx = [0] * N_QUBITS
        idx[INPUT_QUBIT - 1] = b
        psi[tuple(idx) + (b,)] = 1
    return psi


def _run(psi: np.ndarray, gates: Sequence[GateOp]) -> np.ndarray:
    for g in gates:
        psi = apply_gate(psi, g, N_QUBITS)
    return psi


def _project(psi: np.ndarray, fixed: Mapping[int, int]) -> np.ndarray:
    out = np.zeros_like(psi)
    idx = [slice(None)] * psi.ndim
    for q, v in fixed.items():
        idx[q - 1] = v
    out[tuple(idx)] = psi[tuple(idx)]
    return out


def final_states(program: TeleportProgram, mode: str = "feedforward") -> dict[tuple[int, int], np.ndarray]:
    """Post-suffix batched states, already projected on each correction outcome.

    ``feedforward`` projects after the prefix and runs the matching suffix;
    ``variants`` runs all four complete circuits and then keeps, from each, the
    outcomes it is the right correction for.
    """
    psi = _run(_basis_inputs(), program.prefix)
    out = {}
    if mode == "feedforward":
        for c in itertools.product((0, 1), repeat=2):
            fixed = dict(zip(CORRECTION_QUBITS, c))
            out[c] = _run(_project(psi, fixed), program.suffixes[correction_for(*c)])
    elif mode == "variants":
        for v in VARIANTS:
            full = _run(psi, program.suffixes[v])
            for c in itertools.product((0, 1), repeat=2):
                if correction_for(*c) == v:
                    out[c] = _project(full, dict(zip(CORRECTION_QUBITS, c)))
    else:
        raise ValueError(f"unknown execution mode {mode!r}")
    return out


def _output_blocks(psi: np.ndarray) -> np.ndarray:
    """Qubit-6 blocks ``[i, j, a, b]`` summed over every other qubit."""
    t = np.moveaxis(psi, OUTPUT_QUBIT - 1, -2)  # (...7 others..., out, batch)
    t = t.reshape(-1, 2, 2)
    return np.einsum("kai,kbj->ijab", t, t.conj())


def branch_blocks(program: TeleportProgram, mode: str = "feedforward") -> dict[tuple, np.ndarray]:
    """Blocks for every (c1, c2, m1, m2, m3, m4, k) branch."""
    out = {}
    for c, psi in final_states(program, mode).items():
        for bits in itertools.product((0, 1), repeat=5):
            m, k = bits[:4], bits[4]
            fixed = dict(zip(SYNDROME_QUBITS, m))
            fixed[ANCILLA_QUBIT] = k
            out[c + m + (k,)] = _output_blocks(_project(psi, fixed))
    return out


def simulate_draw(program: TeleportProgram, params: NoiseParams | None,
                  rng: np.random.Generator | None) -> tuple[np.ndarray, np.ndarray]:
    """One noisy draw; returns the NS and ES qubit-6 blocks."""
    if params is not None and not params.is_zero():
        program = realize(program, params, rng)
    finals = final_states(program)
    ns = sum(_output_blocks(psi) for psi in finals.values())
    es = sum(_output_blocks(_project(psi, {q: 0 for q in SYNDROME_QUBITS})) for psi in finals.values())
    return ns, es


def rho_from_block(block: np.ndarray, spec: InputStateSpec) -> np.ndarray:
    c = spec.coefficients
    return np.einsum("i,j,ijab->ab", c, c.conj(), block)


def run_teleport(input_state: InputStateSpec | str, policy: PostselectPolicy = NS,
                 noise: NoiseParams | None = None, rng: np.random.Generator | None = None,
                 program: TeleportProgram | None = None,
                 mode: str = "feedforward") -> dict[tuple, RunOutcome]:
    """Every measurement branch with its unnormalised qubit-6 density matrix.

    Branches rejected by ``policy`` are omitted.
    """
    spec = input_state if isinstance(input_state, InputStateSpec) else InputStateSpec.parse(input_state)
    program = program or ideal_program()
    if noise is not None:
        noise.check_qubits(N_QUBITS)
        if not noise.is_zero():
            if rng is None:
                raise ValueError("a noisy run needs an rng")
            program = realize(program, noise, rng)
    out = {}
    for key, block in branch_blocks(program, mode).items():
        c, m, k = key[:2], key[2:6], key[6]
        if policy.keeps(m):
            out[key] = RunOutcome(c, m, k, rho_from_block(block, spec))
    return out


def assemble_density(outcomes: Mapping[tuple, RunOutcome],
                     policy: PostselectPolicy = NS) -> tuple[DensityMatrix, float]:
    """Sum retained branches; the result stays unnormalised and its trace is returned.

    Raises ValueError when nothing is retained.
    """
    kept = [o.rho for o in outcomes.values() if policy.keeps(o.syndrome)]
    if not kept:
        raise ValueError(f"no branches retained under {policy.mode} postselection")
    rho = DensityMatrix(1, sum(kept))
    tr = rho.trace()
    if tr <= 1e-15:
        raise ValueError(f"retained probability is zero under {policy.mode} postselection")
    return rho, tr


def correction_gates(c1: int, c2: int) -> list[GateOp]:
    """Native gates of the logical correction for outcome ``(c1, c2)``."""
    return list(correction_circuit(correction_for(c1, c2)).gates)


def correction_name(c1: int, c2: int) -> str:
    return {"Z": "Z3", "X": "X3", "XZ": "X3Z3", "none": "I3"}[correction_for(c1, c2)]


def teleport_fidelity(spec: InputStateSpec, policy: PostselectPolicy = NS, **kwargs) -> float:
    rho, tr = assemble_density(run_teleport(spec, policy, **kwargs), policy)
    c = spec.coefficients
    return float((c.conj() @ rho.matrix @ c).real) / tr


