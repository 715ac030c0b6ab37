"""Self-checks behind ``mzm-teleport verify``.

Each check returns :class:`Check` records; a clean build passes all of them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .compiler import (
    CircuitIR,
    compile_braid,
    correction_for,
    decoder_circuit,
    encoder_circuit,
    teleport_prefix,
)
from .pauli import BraidGenerator, PauliString, braid_unitary, edge, six_braids
from .state import StateVector, pauli_gate, run
from .teleport import (
    SIX_STATES,
    SYNDROME_QUBITS,
    InputStateSpec,
    TeleportProgram,
    _output_blocks,
    _project,
    final_states,
    ideal_program,
    inject,
)

TOL = 1e-9


@dataclass(frozen=True)
class Check:
    group: str
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'}  {self.group:<12} {self.name}" + (f"  ({self.detail})" if self.detail else "")


def phase_distance(a: np.ndarray, b: np.ndarray) -> float:
    """``min_phi |a - e^{i phi} b|_max``, using the largest entry of ``b`` to fix ``phi``."""
    k = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    if abs(b[k]) < 1e-12:
        return float(np.max(np.abs(a)))
    ph = a[k] / b[k]
    ph /= abs(ph) if abs(ph) > 1e-15 else 1
    return float(np.max(np.abs(a - ph * b)))


def braid_generators_8q() -> dict[str, BraidGenerator]:
    """The two-chain braids plus the ones the teleport program uses on four chains."""
    out = {f"{k} [2 chains]": g for k, g in six_braids().items()}
    for a in (1, 2, 3):
        out[f"sqrt(X{a}X{a + 1}) [4 chains]"] = BraidGenerator(edge(a, "r"), edge(a + 1, "l"))
    out["sqrt(Z3) [4 chains]"] = BraidGenerator(edge(3, "l"), edge(3, "r"))
    return out


def check_braids(compile_fn: Callable[..., CircuitIR] = compile_braid) -> list[Check]:
    out = []
    for name, g in braid_generators_8q().items():
        chains = 4 if "4 chains" in name else 2
        got = compile_fn(g, 2, chains).unitary()
        want = braid_unitary(g, 2, chains)
        err = phase_distance(got, want)
        out.append(Check("braid", name, err < TOL, f"max dev {err:.1e}"))
    return out


def check_codec() -> list[Check]:
    enc = encoder_circuit(1, 2)
    dec = decoder_circuit(1, 2, "standard")
    round_trip = (enc + dec).unitary()
    err = float(np.max(np.abs(round_trip - np.eye(4))))
    out = [Check("codec", "standard decoder inverts encoder", err < TOL, f"max dev {err:.1e}")]
    plus = StateVector.product([np.array([1, 1]) / np.sqrt(2)] * 2)
    got = run(plus, decoder_circuit(1, 2, "modified").gates).amplitudes.reshape(-1)
    err = float(np.max(np.abs(np.abs(got) - np.array([1, 0, 0, 0]))))
    out.append(Check("codec", "modified decoder sends |++> to |00>", err < TOL, f"max dev {err:.1e}"))
    return out


def _rand_inputs(rng: np.random.Generator, n: int) -> list[InputStateSpec]:
    return [InputStateSpec.parse(s) for s in SIX_STATES] + [InputStateSpec.random(rng) for _ in range(n)]


def check_corrections(seed: int = 0, n_random: int = 20) -> list[Check]:
    """Every (c1, c2) branch, after its correction, carries the input with fidelity 1."""
    finals = final_states(ideal_program())
    inputs = _rand_inputs(np.random.default_rng(seed), n_random)
    out = []
    for c in itertools.product((0, 1), repeat=2):
        block = _output_blocks(finals[c])
        worst = 0.0
        for spec in inputs:
            v = spec.coefficients
            rho = np.einsum("i,j,ijab->ab", v, v.conj(), block)
            worst = max(worst, abs(1 - (v.conj() @ rho @ v).real / np.trace(rho).real))
        out.append(Check("correction", f"c={c} -> {correction_for(*c)}", worst < TOL, f"max |1-F| {worst:.1e}"))
    return out


def es_fidelities(program: TeleportProgram, inputs) -> list[tuple[float, float | None, float]]:
    """Per input: (ES weight, ES fidelity or None when nothing survives, NS fidelity)."""
    finals = final_states(program)
    ns = sum(_output_blocks(x) for x in finals.values())
    es = sum(_output_blocks(_project(x, {q: 0 for q in SYNDROME_QUBITS})) for x in finals.values())
    out = []
    for spec in inputs:
        v = spec.coefficients
        r_es = np.einsum("i,j,ijab->ab", v, v.conj(), es)
        r_ns = np.einsum("i,j,ijab->ab", v, v.conj(), ns)
        w = float(np.trace(r_es).real)
        f_es = float((v.conj() @ r_es @ v).real) / w if w > 1e-12 else None
        out.append((w, f_es, float((v.conj() @ r_ns @ v).real / np.trace(r_ns).real)))
    return out


def logical_positions() -> list[int]:
    """Prefix indices after encoding that fall between logical steps."""
    prefix = teleport_prefix()
    first = len(encoder_circuit(1, 2).gates) * 3
    return sorted({k for k in prefix.seams if k >= first} | {len(prefix.gates)})


def z_string(*qubits: int, n: int = 8) -> PauliString:
    return PauliString(0, "".join("Z" if q in qubits else "I" for q in range(1, n + 1)))


def classify_injection(position: int, qubits: tuple[int, ...], inputs) -> str:
    """``trivial``, ``flagged`` (ES recovers F = 1) or ``missed``."""
    prog = inject(ideal_program(), position, pauli_gate(z_string(*qubits)))
    res = es_fidelities(prog, inputs)
    if all(abs(f_ns - 1) < TOL for _, _, f_ns in res):
        return "trivial"
    if all(f is None or abs(f - 1) < TOL for _, f, _ in res):
        return "flagged"
    return "missed"


def check_detection(seed: int = 0) -> list[Check]:
    inputs = _rand_inputs(np.random.default_rng(seed), 4)
    out = []
    for pos in logical_positions():
        kinds = {q: classify_injection(pos, (q,), inputs) for q in range(1, 7)}
        missed = [q for q, k in kinds.items() if k == "missed"]
        out.append(Check("detection", f"single Z at position {pos}", not missed,
                         f"missed on qubits {missed}" if missed else
                         f"{sum(k == 'flagged' for k in kinds.values())} flagged"))
    plus = [InputStateSpec.parse("+")]
    w, f, _ = es_fidelities(inject(ideal_program(), logical_positions()[0], pauli_gate(z_string(1, 2))), plus)[0]
    ok = abs(w - 1) < TOL and f is not None and f < TOL
    out.append(Check("detection", "Z1Z2 is an undetected logical Z", ok, f"ES weight {w:.3f}, F(+) {f:.3f}"))
    return out


def run_all() -> list[Check]:
    return check_braids() + check_codec() + check_corrections() + check_detection()
