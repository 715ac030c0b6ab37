"""Exact signed Pauli strings, Majorana labels and their Jordan-Wigner images.

Phases are tracked as integers ``k`` meaning ``i**k`` so every product stays
exact. Qubits are labelled globally ``1..N*M`` in chain-major order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

_PHASE_TEXT = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_TEXT_PHASE = {v: k for k, v in _PHASE_TEXT.items()}
_PHASE_VALUE = {0: 1, 1: 1j, 2: -1, 3: -1j}

# (a, b) -> (phase exponent, product) for single-site a*b
_SITE_PRODUCT = {}
for _a in "IXYZ":
    _SITE_PRODUCT[("I", _a)] = (0, _a)
    _SITE_PRODUCT[(_a, "I")] = (0, _a)
    _SITE_PRODUCT[(_a, _a)] = (0, "I")
for _a, _b, _c in (("X", "Y", "Z"), ("Y", "Z", "X"), ("Z", "X", "Y")):
    _SITE_PRODUCT[(_a, _b)] = (1, _c)
    _SITE_PRODUCT[(_b, _a)] = (3, _c)

SINGLE_QUBIT = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class PauliString:
    """``i**phase * factors[0] (x) factors[1] (x) ...``; factors[0] acts on qubit 1."""

    phase: int
    factors: str

    def __post_init__(self):
        object.__setattr__(self, "phase", self.phase % 4)
        if not self.factors or set(self.factors) - set("IXYZ"):
            raise ValueError(f"bad Pauli factors {self.factors!r}")

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(0, "I" * n)

    @classmethod
    def single(cls, n: int, qubit: int, op: str) -> "PauliString":
        if not 1 <= qubit <= n:
            raise ValueError(f"qubit {qubit} out of range 1..{n}")
        chars = ["I"] * n
        chars[qubit - 1] = op
        return cls(0, "".join(chars))

    @classmethod
    def from_ops(cls, n: int, ops: dict[int, str], phase: int = 0) -> "PauliString":
        chars = ["I"] * n
        for qubit, op in ops.items():
            if not 1 <= qubit <= n:
                raise ValueError(f"qubit {qubit} out of range 1..{n}")
            chars[qubit - 1] = op
        return cls(phase, "".join(chars))

    @classmethod
    def parse(cls, text: str) -> "PauliString":
        """Inverse of ``str``: ``"-i.YZXI"`` -> PauliString(3, "YZXI")."""
        sign, _, factors = text.strip().partition(".")
        if sign not in _TEXT_PHASE:
            raise ValueError(f"bad phase prefix in {text!r}")
        return cls(_TEXT_PHASE[sign], factors)

    def __str__(self) -> str:
        return f"{_PHASE_TEXT[self.phase]}.{self.factors}"

    @property
    def n_qubits(self) -> int:
        return len(self.factors)

    @property
    def coefficient(self) -> complex:
        return _PHASE_VALUE[self.phase]

    @property
    def support(self) -> tuple[int, ...]:
        """1-based qubits carrying a non-identity factor."""
        return tuple(i + 1 for i, f in enumerate(self.factors) if f != "I")

    @property
    def is_hermitian(self) -> bool:
        return self.phase in (0, 2)

    def __mul__(self, other: "PauliString") -> "PauliString":
        return multiply(self, other)

    def __neg__(self) -> "PauliString":
        return PauliString(self.phase + 2, self.factors)

    def scaled(self, phase: int) -> "PauliString":
        """Multiply by ``i**phase``."""
        return PauliString(self.phase + phase, self.factors)

    def unsigned(self) -> "PauliString":
        return PauliString(0, self.factors)

    def commutes_with(self, other: "PauliString") -> bool:
        _check_lengths(self, other)
        clashes = sum(
            1 for a, b in zip(self.factors, other.factors)
            if a != "I" and b != "I" and a != b
        )
        return clashes % 2 == 0

    def dagger(self) -> "PauliString":
        return PauliString(-self.phase, self.factors)

    def to_matrix(self) -> np.ndarray:
        """Dense matrix; qubit 1 is the most significant tensor factor."""
        mat = reduce(np.kron, (SINGLE_QUBIT[f] for f in self.factors))
        return self.coefficient * mat


def _check_lengths(p: PauliString, q: PauliString) -> None:
    if p.n_qubits != q.n_qubits:
        raise ValueError(f"length mismatch: {p.n_qubits} vs {q.n_qubits}")


def multiply(p: PauliString, q: PauliString) -> PauliString:
    """Exact product ``p * q``."""
    _check_lengths(p, q)
    phase = p.phase + q.phase
    out = []
    for a, b in zip(p.factors, q.factors):
        k, c = _SITE_PRODUCT[(a, b)]
        phase += k
        out.append(c)
    return PauliString(phase, "".join(out))


def product(strings: Iterable[PauliString]) -> PauliString:
    return reduce(multiply, strings)


@dataclass(frozen=True, order=True)
class MajoranaLabel:
    """Majorana operator ``gamma_{site, side}`` on chain ``chain`` (all 1-based)."""

    chain: int
    site: int
    side: str

    def __post_init__(self):
        if self.side not in ("l", "r"):
            raise ValueError(f"side must be 'l' or 'r', got {self.side!r}")
        if self.chain < 1 or self.site < 1:
            raise ValueError(f"chain and site are 1-based, got {self}")

    def __str__(self) -> str:
        return f"({self.chain},{self.site},{self.side})"


def edge(chain: int, side: str, n_sites: int = 2) -> MajoranaLabel:
    """Zero-mode shorthand: left mode sits on site 1, right mode on site N."""
    return MajoranaLabel(chain, 1 if side == "l" else n_sites, side)


def jordan_wigner(label: MajoranaLabel, n_sites: int, n_chains: int) -> PauliString:
    """Spin image of a Majorana operator.

    ``gamma_l`` on global qubit q becomes ``Z_1 ... Z_{q-1} X_q`` and
    ``gamma_r`` becomes ``Z_1 ... Z_{q-1} Y_q``.
    """
    if not 1 <= label.chain <= n_chains or not 1 <= label.site <= n_sites:
        raise ValueError(f"label {label} out of range for N={n_sites}, M={n_chains}")
    q = (label.chain - 1) * n_sites + label.site
    ops = {i: "Z" for i in range(1, q)}
    ops[q] = "X" if label.side == "l" else "Y"
    return PauliString.from_ops(n_sites * n_chains, ops)


@dataclass(frozen=True)
class BraidGenerator:
    """Exchange ``B_ab = (1 + gamma_a gamma_b)/sqrt(2)``."""

    a: MajoranaLabel
    b: MajoranaLabel

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError(f"braid needs two distinct Majoranas, got {self.a} twice")

    def __str__(self) -> str:
        return f"B{self.a}{self.b}"


def braid_spin_rep(g: BraidGenerator, n_sites: int, n_chains: int) -> tuple[int, PauliString]:
    """Return ``(s, P)`` with ``s*P = JW(gamma_a) JW(gamma_b)`` and P phase-free.

    ``s`` is the exponent of ``i``; because distinct Majoranas anticommute,
    ``(s*P)**2 = -1`` and s is always odd.
    """
    prod = multiply(jordan_wigner(g.a, n_sites, n_chains), jordan_wigner(g.b, n_sites, n_chains))
    return prod.phase, prod.unsigned()


def braid_generator_string(g: BraidGenerator, n_sites: int, n_chains: int) -> PauliString:
    """The signed string ``s*P`` of the braid's spin image."""
    s, p = braid_spin_rep(g, n_sites, n_chains)
    return p.scaled(s)


def conjugate_by_braid(sp: PauliString, target: PauliString) -> PauliString:
    """Exact ``U target U^dagger`` for ``U = (1 + sp)/sqrt(2)``, ``sp**2 = -1``.

    Commuting targets are unchanged; anticommuting ones become ``sp * target``.
    """
    if target.commutes_with(sp):
        return target
    return multiply(sp, target)


def conjugate_majorana(g: BraidGenerator, target: MajoranaLabel) -> tuple[int, MajoranaLabel]:
    if target == g.a:
        return -1, g.b
    if target == g.b:
        return 1, g.a
    return 1, target


def braid_unitary(g: BraidGenerator, n_sites: int, n_chains: int) -> np.ndarray:
    """Dense ``(1 + sP)/sqrt(2)`` over all ``N*M`` qubits."""
    sp = braid_generator_string(g, n_sites, n_chains)
    dim = 2 ** sp.n_qubits
    return (np.eye(dim, dtype=complex) + sp.to_matrix()) / np.sqrt(2)


BraidWord = Sequence[BraidGenerator]


def word_unitary(word: BraidWord, n_sites: int, n_chains: int) -> np.ndarray:
    """Dense unitary of a braid word; ``word[0]`` is applied first."""
    if not word:
        raise ValueError("empty braid word")
    u = np.eye(2 ** (n_sites * n_chains), dtype=complex)
    for g in word:
        u = braid_unitary(g, n_sites, n_chains) @ u
    return u


def logical_basis_two_chains(n_sites: int) -> np.ndarray:
    """Columns |00_L>, |01_L>, |10_L>, |11_L> as product states of two chains."""
    from .kitaev import logical_states

    basis = logical_states(n_sites)
    zero, one = basis.zero_L.amplitudes, basis.one_L.amplitudes
    cols = [np.kron(a, b) for a in (zero, one) for b in (zero, one)]
    return np.column_stack(cols)


def logical_action(word: BraidWord, n_sites: int = 2) -> np.ndarray:
    """4x4 action of a two-chain braid word on the logical basis.

    Raises ValueError if the word leaks out of the logical subspace.
    """
    for g in word:
        for label in (g.a, g.b):
            if label.chain not in (1, 2) or label.site not in (1, n_sites):
                raise ValueError(f"{label} is not an edge zero mode of two chains")
            if (label.site == 1) != (label.side == "l"):
                raise ValueError(f"{label} is not an edge zero mode of two chains")
    basis = logical_basis_two_chains(n_sites)
    mapped = word_unitary(word, n_sites, 2) @ basis
    action = basis.conj().T @ mapped
    if not np.allclose(basis @ action, mapped, atol=1e-12):
        raise ValueError("braid word leaves the logical subspace")
    return action


# The six edge braids of two chains, keyed by the logical gate they realise.
def six_braids(n_sites: int = 2) -> dict[str, BraidGenerator]:
    l1, r1 = edge(1, "l", n_sites), edge(1, "r", n_sites)
    l2, r2 = edge(2, "l", n_sites), edge(2, "r", n_sites)
    return {
        "sqrt(Z1)": BraidGenerator(l1, r1),
        "sqrt(Z2)": BraidGenerator(l2, r2),
        "sqrt(X1X2)": BraidGenerator(r1, l2),
        "sqrt(Y1X2)": BraidGenerator(l1, l2),
        "sqrt(Y1Y2)": BraidGenerator(l1, r2),
        "sqrt(X1Y2)": BraidGenerator(r1, r2),
    }
