"""Single-qubit tomography: Pauli expectations, Bloch-ball estimator, fidelity."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .state import DensityMatrix

CLASSICAL_BOUND = 2 / 3

PAULIS = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class BlochVector:
    x: float
    y: float
    z: float

    @property
    def norm(self) -> float:
        return float(np.sqrt(self.x ** 2 + self.y ** 2 + self.z ** 2))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    @classmethod
    def of(cls, rho: np.ndarray) -> "BlochVector":
        return cls(*(float(np.trace(rho @ PAULIS[a]).real) for a in "XYZ"))


def _matrix(rho) -> np.ndarray:
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 density matrix, got shape {m.shape}")
    return m


def expectations_from_state(rho, shots: int | None = None,
                            rng: np.random.Generator | None = None) -> BlochVector:
    """Exact <X>, <Y>, <Z>, or frequencies from ``shots`` projective measurements per axis."""
    m = _matrix(rho)
    tr = np.trace(m).real
    exact = BlochVector.of(m / tr)
    if shots is None:
        return exact
    if shots <= 0:
        raise ValueError("shots must be positive")
    if rng is None:
        raise ValueError("shot sampling needs an rng")
    r = []
    for e in exact.as_array():
        p_up = min(max((1 + e) / 2, 0.0), 1.0)
        r.append(2 * rng.binomial(shots, p_up) / shots - 1)
    return BlochVector(*r)


def reconstruct(b: BlochVector) -> DensityMatrix:
    """Nearest point of the Bloch ball, i.e. ``b / |b|`` when ``|b| > 1``."""
    r = b.as_array()
    if not np.all(np.isfinite(r)):
        raise ValueError("Bloch vector has non-finite components")
    n = np.linalg.norm(r)
    if n > 1:
        r = r / n
    rho = 0.5 * (np.eye(2) + sum(c * PAULIS[a] for c, a in zip(r, "XYZ")))
    return DensityMatrix(1, rho)


def fidelity(rho, psi) -> float:
    m = _matrix(rho)
    v = np.asarray(psi, dtype=complex).reshape(-1)
    if v.shape != (2,):
        raise ValueError("state and density matrix dimensions differ")
    v = v / np.linalg.norm(v)
    return float(np.real(v.conj() @ m @ v))


def trace_distance(a, b) -> float:
    ev = np.linalg.eigvalsh(_matrix(a) - _matrix(b))
    return float(np.abs(ev).sum() / 2)
