"""Spin-mapped trivial and Kitaev chain Hamiltonians and their logical states."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import MajoranaLabel, PauliString, jordan_wigner
from .state import StateVector

MAX_DENSE_SITES = 10


@dataclass(frozen=True)
class ChainSpec:
    """``kind`` is ``"trivial"`` or ``"kitaev"``.

    ``offset_convention="raw"`` is the Majorana-pairing form
    ``t/2 * sum(1 + i gamma gamma)`` whose spectrum is ``t * sum(j_n)``;
    ``"shifted"`` is the bare fermion form ``t * sum(i gamma gamma)``, which for
    a two-site Kitaev chain reduces to ``-t X1 X2``.
    """

    N: int
    t: float = 1.0
    kind: str = "kitaev"
    offset_convention: str = "raw"

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("N must be at least 2")
        if not self.t > 0:
            raise ValueError("t must be positive")
        if self.kind not in ("trivial", "kitaev"):
            raise ValueError(f"unknown chain kind {self.kind!r}")
        if self.offset_convention not in ("raw", "shifted"):
            raise ValueError(f"unknown offset convention {self.offset_convention!r}")


def _gamma(site: int, side: str, n: int) -> np.ndarray:
    return jordan_wigner(MajoranaLabel(1, site, side), n, 1).to_matrix()


def pairings(spec: ChainSpec) -> list[tuple[tuple[int, str], tuple[int, str]]]:
    if spec.kind == "trivial":
        return [((n, "l"), (n, "r")) for n in range(1, spec.N + 1)]
    return [((n, "r"), (n + 1, "l")) for n in range(1, spec.N)]


def build_hamiltonian(spec: ChainSpec, max_sites: int = MAX_DENSE_SITES) -> np.ndarray:
    if spec.N > max_sites:
        raise ValueError(f"N={spec.N} exceeds the dense cap of {max_sites}")
    dim = 2 ** spec.N
    ident = np.eye(dim, dtype=complex)
    ham = np.zeros((dim, dim), dtype=complex)
    for (n1, s1), (n2, s2) in pairings(spec):
        term = 1j * _gamma(n1, s1, spec.N) @ _gamma(n2, s2, spec.N)
        if spec.offset_convention == "raw":
            ham += spec.t / 2 * (ident + term)
        else:
            ham += spec.t * term
    return ham


def spectrum(spec: ChainSpec) -> np.ndarray:
    return np.linalg.eigvalsh(build_hamiltonian(spec))


def degeneracies(values: np.ndarray, tol: float) -> list[tuple[float, int]]:
    """Group sorted eigenvalues into ``(level, multiplicity)`` pairs."""
    groups: list[list[float]] = []
    for v in np.sort(values):
        if groups and abs(v - groups[-1][0]) <= tol:
            groups[-1].append(v)
        else:
            groups.append([v])
    return [(float(np.mean(g)), len(g)) for g in groups]


@dataclass
class LogicalBasis:
    zero_L: StateVector
    one_L: StateVector
    tilde_zero_L: StateVector | None = None
    tilde_one_L: StateVector | None = None


def _uniform(n: int, sign: int) -> np.ndarray:
    single = np.array([1, sign], dtype=complex) / np.sqrt(2)
    out = np.array([1], dtype=complex)
    for _ in range(n):
        out = np.kron(out, single)
    return out


def logical_states(N: int) -> LogicalBasis:
    """``(|+...+> +- |-...->)/sqrt(2)``; tilde states are only defined for N=2."""
    if N < 2:
        raise ValueError("N must be at least 2")
    plus, minus = _uniform(N, 1), _uniform(N, -1)
    basis = LogicalBasis(
        StateVector(N, (plus + minus) / np.sqrt(2)),
        StateVector(N, (plus - minus) / np.sqrt(2)),
    )
    if N == 2:
        p = np.array([1, 1], dtype=complex) / np.sqrt(2)
        m = np.array([1, -1], dtype=complex) / np.sqrt(2)
        mp, pm = np.kron(m, p), np.kron(p, m)
        basis.tilde_zero_L = StateVector(2, (mp + pm) / np.sqrt(2))
        basis.tilde_one_L = StateVector(2, (mp - pm) / np.sqrt(2))
    return basis


def edge_fermion_dagger(N: int) -> np.ndarray:
    """Spin image of ``f_N^dagger = (gamma_{1,l} - i gamma_{N,r}) / 2``."""
    return (_gamma(1, "l", N) - 1j * _gamma(N, "r", N)) / 2


def fermion_annihilator(site: int, N: int) -> np.ndarray:
    """``c_n = (gamma_{n,l} + i gamma_{n,r}) / 2`` in the spin picture."""
    return (_gamma(site, "l", N) + 1j * _gamma(site, "r", N)) / 2


def logical_z(N: int) -> PauliString:
    """``Z_1 Z_2 ... Z_N`` flips |+...+> <-> |-...->, i.e. logical Z on the MZM qubit."""
    return PauliString(0, "Z" * N)
