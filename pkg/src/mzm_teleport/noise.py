"""Gaussian gate-time jitter, mid-circuit dephasing pulses and Monte Carlo fidelity.

Widths are standard deviations in units of pi: a jittered rotation by ``theta``
becomes ``theta * (1 + xi)``, a dephasing pulse is ``R_z(xi * pi)``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .state import HADAMARD, SINGLE_QUBIT, GateOp, rz, ry

QUBITS = tuple(range(1, 9))
PAIRS = tuple((q, q + 1) for q in range(1, 8))

# Characterisation values for the eight-qubit device (per qubit Q1..Q8, per
# adjacent pair Q1Q2..Q7Q8).
TABLE_SIGMA_G = (0.016, 0.017, 0.017, 0.018, 0.014, 0.017, 0.013, 0.014)
TABLE_F_SINGLE = (0.9994, 0.9993, 0.9993, 0.9992, 0.9995, 0.9993, 0.9996, 0.9995)
TABLE_SIGMA_CZ = (0.08287, 0.075524, 0.0729, 0.0757, 0.10285, 0.0528, 0.056)
TABLE_F_CZ = (0.9832, 0.9861, 0.987, 0.9861, 0.9744, 0.9932, 0.9923)
TABLE_T2_STAR = (4.73, 2.25, 4.91, 1.25, 6.22, 2.39, 4.7, 2.89)
TABLE_SIGMA_D = (0.11407, 0.05426, 0.11841, 0.03014, 0.15, 0.05764, 0.11334, 0.06969)
DEFAULT_C_D = 0.15

DEPHASING_POLICIES = ("midpoint", "per_moment")


def derive_sigma_d(t2_star: Mapping[int, float], c_d: float) -> dict[int, float]:
    """``sigma_d[q] = c_d * T2*[q] / max(T2*)``."""
    if not t2_star:
        raise ValueError("empty T2* map")
    if any(t <= 0 for t in t2_star.values()):
        raise ValueError("T2* values must be positive")
    if c_d < 0:
        raise ValueError("c_d must be non-negative")
    top = max(t2_star.values())
    return {q: c_d * t / top for q, t in t2_star.items()}


@dataclass
class NoiseParams:
    sigma_g: dict[int, float] = field(default_factory=dict)
    sigma_cz: dict[tuple[int, int], float] = field(default_factory=dict)
    sigma_d: dict[int, float] = field(default_factory=dict)
    c_d: float = 0.0
    t2_star: dict[int, float] = field(default_factory=dict)
    dephasing_policy: str = "midpoint"

    def __post_init__(self):
        if self.dephasing_policy not in DEPHASING_POLICIES:
            raise ValueError(f"unknown dephasing policy {self.dephasing_policy!r}")
        if self.c_d < 0:
            raise ValueError("c_d must be non-negative")
        self.sigma_cz = {tuple(sorted(k)): v for k, v in self.sigma_cz.items()}
        for name in ("sigma_g", "sigma_cz", "sigma_d"):
            if any(v < 0 for v in getattr(self, name).values()):
                raise ValueError(f"{name} widths must be non-negative")
        if not self.sigma_d and self.t2_star:
            self.sigma_d = derive_sigma_d(self.t2_star, self.c_d)

    @classmethod
    def zero(cls, n_qubits: int = 8) -> "NoiseParams":
        qs = range(1, n_qubits + 1)
        return cls({q: 0.0 for q in qs}, {(q, q + 1): 0.0 for q in range(1, n_qubits)},
                   {q: 0.0 for q in qs})

    @classmethod
    def uniform(cls, sigma_g: float = 0.0, sigma_cz: float = 0.0, sigma_d: float = 0.0,
                n_qubits: int = 8, dephasing_policy: str = "midpoint") -> "NoiseParams":
        qs = range(1, n_qubits + 1)
        return cls({q: sigma_g for q in qs}, {(q, q + 1): sigma_cz for q in range(1, n_qubits)},
                   {q: sigma_d for q in qs}, dephasing_policy=dephasing_policy)

    @classmethod
    def from_tables(cls, c_d: float = DEFAULT_C_D, dephasing_policy: str = "midpoint") -> "NoiseParams":
        return cls(
            sigma_g=dict(zip(QUBITS, TABLE_SIGMA_G)),
            sigma_cz=dict(zip(PAIRS, TABLE_SIGMA_CZ)),
            c_d=c_d,
            t2_star=dict(zip(QUBITS, TABLE_T2_STAR)),
            dephasing_policy=dephasing_policy,
        )

    def check_qubits(self, n_qubits: int) -> None:
        bad = [q for q in (*self.sigma_g, *self.sigma_d) if not 1 <= q <= n_qubits]
        bad += [p for p in self.sigma_cz if not all(1 <= q <= n_qubits for q in p)]
        if bad:
            raise ValueError(f"noise parameters reference unknown qubits: {bad}")

    def is_zero(self) -> bool:
        return not any(v > 0 for d in (self.sigma_g, self.sigma_cz, self.sigma_d) for v in d.values())


# -- per-gate samplers -----------------------------------------------------

def _hadamard_axis_rotation(q: int, angle: float) -> list[GateOp]:
    """Rotation about ``(x+z)/sqrt(2)``, the axis of the Hadamard."""
    return [ry(q, math.pi / 4), rz(q, angle), ry(q, -math.pi / 4)]


def sample_noisy_single(gate: GateOp, sigma: float, rng: np.random.Generator) -> list[GateOp]:
    """Over-rotate by ``xi * theta`` with ``xi ~ N(0, sigma**2)``.

    A Hadamard is treated as a pi rotation about its own axis.
    """
    xi = rng.normal(0.0, sigma) if sigma > 0 else 0.0
    if gate.kind == "H":
        if xi == 0.0:
            return [gate]
        return [gate, *_hadamard_axis_rotation(gate.qubits[0], xi * math.pi)]
    if gate.kind not in ("RX", "RY", "RZ"):
        raise ValueError(f"{gate.kind} is not a single-qubit rotation")
    return [GateOp(gate.kind, gate.qubits, gate.angle * (1 + xi))]


def sample_noisy_cz(gate: GateOp, sigma: float, rng: np.random.Generator) -> list[GateOp]:
    """CZ followed by a random ``R_z(xi pi)`` on the target qubit."""
    if gate.kind != "CZ":
        raise ValueError("expected a CZ gate")
    xi = rng.normal(0.0, sigma) if sigma > 0 else 0.0
    if xi == 0.0:
        return [gate]
    return [gate, rz(gate.qubits[1], xi * math.pi)]


def jitter(gates: Iterable[GateOp], params: NoiseParams, rng: np.random.Generator) -> list[GateOp]:
    """One noisy realisation of a gate list; phases and Pauli gates pass through."""
    out: list[GateOp] = []
    for g in gates:
        if g.kind in ("RX", "RY", "RZ", "H"):
            out += sample_noisy_single(g, params.sigma_g.get(g.qubits[0], 0.0), rng)
        elif g.kind == "CZ":
            out += sample_noisy_cz(g, params.sigma_cz.get(tuple(sorted(g.qubits)), 0.0), rng)
        else:
            out.append(g)
    return out


def _layer_index(gates: Sequence[GateOp], n_qubits: int) -> list[int]:
    frontier = [0] * (n_qubits + 1)
    depth_of = []
    current = 0
    for g in gates:
        qs = g.touched()
        if not qs:
            depth_of.append(current)
            continue
        d = max(frontier[q] for q in qs)
        for q in qs:
            frontier[q] = d + 1
        current = d
        depth_of.append(d)
    return depth_of


def midpoint_cut(gates: Sequence[GateOp], n_qubits: int, seams: Sequence[int] = ()) -> int:
    """Gate index at which the midpoint pulses go.

    A seam (block boundary) is usable when, in the as-soon-as-possible
    schedule, every gate before it finishes before any gate after it starts.
    The usable seam nearest half the total depth wins, so the pulses land
    between logical steps rather than inside a decomposition. Without one the
    cut is the first gate of the middle layer.
    """
    depth = _layer_index(gates, n_qubits)
    if not depth:
        return 0
    half = (max(depth) + 1) / 2
    clean = [k for k in seams if 0 < k < len(depth) and max(depth[:k]) < min(depth[k:])]
    if clean:
        return min(clean, key=lambda k: (abs(min(depth[k:]) - half), k))
    mid = int(half)
    return next(i for i, d in enumerate(depth) if d >= mid)


def apply_dephasing(gates: Sequence[GateOp], n_qubits: int, params: NoiseParams,
                    rng: np.random.Generator, seams: Sequence[int] = (),
                    transform: Callable[[Sequence[GateOp]], list[GateOp]] | None = None) -> list[GateOp]:
    """Insert random ``R_z(xi pi)`` pulses, ``xi ~ N(0, sigma_d[q]**2)``.

    ``midpoint``: one pulse per qubit at :func:`midpoint_cut`.
    ``per_moment``: one pulse per qubit after every layer, each with width
    ``sigma_d / sqrt(layers)`` so the summed variance is unchanged.
    ``transform`` (e.g. gate jitter) is applied to the gate segments between
    pulse sets, so placement is decided on the ideal circuit.
    """
    transform = transform or list
    qubits = [q for q in range(1, n_qubits + 1) if params.sigma_d.get(q, 0.0) > 0]
    if not qubits or not gates:
        return transform(gates)

    def pulses(scale: float) -> list[GateOp]:
        return [rz(q, rng.normal(0.0, params.sigma_d[q] * scale) * math.pi) for q in qubits]

    if params.dephasing_policy == "midpoint":
        cut = midpoint_cut(gates, n_qubits, seams)
        head = transform(gates[:cut])
        mid = pulses(1.0)
        return head + mid + transform(gates[cut:])
    depth = _layer_index(gates, n_qubits)
    n_layers = max(depth) + 1
    scale = 1.0 / math.sqrt(n_layers)
    out: list[GateOp] = []
    for layer in range(n_layers):
        out += transform([g for g, d in zip(gates, depth) if d == layer])
        out += pulses(scale)
    return out


# -- gate calibration ------------------------------------------------------

def closed_form_gate_fidelity(sigma: float) -> float:
    """``E[cos^2(xi pi / 2)] = (1 + exp(-pi^2 sigma^2 / 2)) / 2``."""
    return (1 + math.exp(-(math.pi * sigma) ** 2 / 2)) / 2


def _rotations(axis: str, angles: np.ndarray) -> np.ndarray:
    """Stack of ``rotation(axis, a)`` matrices, shape ``(len(angles), 2, 2)``."""
    c = np.cos(angles / 2)[:, None, None]
    sn = np.sin(angles / 2)[:, None, None]
    return c * np.eye(2, dtype=complex) + 1j * sn * SINGLE_QUBIT[axis]


def _mean_se(vals: np.ndarray) -> tuple[float, float]:
    se = float(vals.std(ddof=1) / math.sqrt(vals.size)) if vals.size > 1 else 0.0
    return float(vals.mean()), se


def mc_single_gate_fidelity(sigma: float, draws: int, rng: np.random.Generator) -> tuple[float, float]:
    """Mean and standard error of ``|<1| R_x(pi + xi pi) |0>|^2``."""
    xi = rng.normal(0.0, sigma, draws) if sigma > 0 else np.zeros(draws)
    out = _rotations("X", math.pi * (1 + xi)) @ np.array([1, 0], dtype=complex)
    return _mean_se(np.abs(out[:, 1]) ** 2)


def mc_cz_gate_fidelity(sigma: float, draws: int, rng: np.random.Generator) -> tuple[float, float]:
    """Mean and standard error of ``|<1-| R_z(xi pi) CZ |1+>|^2`` (phase on the target)."""
    xi = rng.normal(0.0, sigma, draws) if sigma > 0 else np.zeros(draws)
    one = np.array([0, 1], dtype=complex)
    plus = HADAMARD @ np.array([1, 0], dtype=complex)
    minus = HADAMARD @ one
    ket = np.diag([1, 1, 1, -1]).astype(complex) @ np.kron(one, plus)
    bra = np.kron(one, minus).conj()
    target = ket.reshape(2, 2)  # [control, target]
    rotated = np.einsum("nab,cb->nca", _rotations("Z", xi * math.pi), target)
    return _mean_se(np.abs(rotated.reshape(draws, 4) @ bra) ** 2)


# -- Monte Carlo teleportation ---------------------------------------------

@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    draws: int
    seed: int
    discarded: int = 0

    @classmethod
    def from_samples(cls, samples: Sequence[float], seed: int, discarded: int = 0) -> "McEstimate":
        arr = np.asarray(samples, dtype=float)
        if arr.size == 0:
            return cls(float("nan"), float("nan"), 0, seed, discarded)
        se = float(arr.std(ddof=1) / math.sqrt(arr.size)) if arr.size > 1 else 0.0
        return cls(float(arr.mean()), se, int(arr.size), seed, discarded)


def draw_rng(seed: int, draw: int) -> np.random.Generator:
    """Independent stream for draw ``draw`` so any execution order gives the same numbers."""
    return np.random.default_rng(np.random.SeedSequence([seed, draw]))


def _draw_chunk(args) -> list[tuple[int, np.ndarray, np.ndarray]]:
    from .teleport import ideal_program, simulate_draw

    params, seed, draws = args
    program = ideal_program()
    out = []
    for d in draws:
        rho_ns, rho_es = simulate_draw(program, params, draw_rng(seed, d))
        out.append((d, rho_ns, rho_es))
    return out


def teleport_draws(params: NoiseParams, draws: int, seed: int,
                   workers: int = 1) -> list[tuple[np.ndarray, np.ndarray]]:
    """Per-draw qubit-6 blocks for basis inputs, sorted by draw index.

    Each entry is ``(rho_ns, rho_es)`` with shape ``(2, 2, 2, 2)`` indexed
    ``[input_i, input_j, row, col]``; the density matrix for input
    ``a|0> + b|1>`` is ``sum_ij c_i conj(c_j) block[i, j]`` with ``c = (a, b)``.
    """
    if draws < 1:
        raise ValueError("need at least one draw")
    params.check_qubits(8)
    indices = list(range(draws))
    if workers <= 1:
        results = _draw_chunk((params, seed, indices))
    else:
        chunks = [indices[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(workers) as pool:
            results = [r for part in pool.map(_draw_chunk, [(params, seed, c) for c in chunks]) for r in part]
    results.sort(key=lambda r: r[0])
    return [(ns, es) for _, ns, es in results]


def _fidelity_from_block(block: np.ndarray, coeffs: np.ndarray) -> tuple[float, float]:
    rho = np.einsum("i,j,ijab->ab", coeffs, coeffs.conj(), block)
    tr = float(np.trace(rho).real)
    if tr <= 1e-15:
        return float("nan"), tr
    return float((coeffs.conj() @ rho @ coeffs).real) / tr, tr


def fidelities_from_draws(blocks: Sequence[tuple[np.ndarray, np.ndarray]], coeffs: Sequence[complex],
                          seed: int) -> tuple[McEstimate, McEstimate]:
    c = np.asarray(coeffs, dtype=complex)
    ns, es, dropped = [], [], 0
    for rho_ns, rho_es in blocks:
        f, _ = _fidelity_from_block(rho_ns, c)
        ns.append(f)
        f, _ = _fidelity_from_block(rho_es, c)
        if math.isnan(f):
            dropped += 1
        else:
            es.append(f)
    return McEstimate.from_samples(ns, seed), McEstimate.from_samples(es, seed, dropped)


def monte_carlo_teleport(input_state, params: NoiseParams, draws: int, seed: int,
                         workers: int = 1) -> tuple[McEstimate, McEstimate]:
    """``(f_NS, f_ES)``: mean over draws of ``<psi|rho|psi> / tr(rho)``.

    Draws whose error-detected block has zero weight are left out of f_ES and
    counted in ``discarded``.
    """
    from .teleport import InputStateSpec

    spec = input_state if isinstance(input_state, InputStateSpec) else InputStateSpec.parse(input_state)
    blocks = teleport_draws(params, draws, seed, workers)
    return fidelities_from_draws(blocks, spec.coefficients, seed)
