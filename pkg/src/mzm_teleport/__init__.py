"""Majorana-chain teleportation: Pauli algebra, braid compiler, simulator, noise."""

from .compiler import CircuitIR, compile_braid, compile_word
from .kitaev import ChainSpec, spectrum
from .noise import McEstimate, NoiseParams, monte_carlo_teleport
from .pauli import BraidGenerator, MajoranaLabel, PauliString, jordan_wigner, logical_action
from .state import DensityMatrix, StateVector
from .teleport import ES, NS, InputStateSpec, PostselectPolicy, run_teleport
from .tomography import BlochVector, expectations_from_state, fidelity, reconstruct

__all__ = [
    "BlochVector", "BraidGenerator", "ChainSpec", "CircuitIR", "DensityMatrix", "ES",
    "InputStateSpec", "MajoranaLabel", "McEstimate", "NS", "NoiseParams", "PauliString",
    "PostselectPolicy", "StateVector", "compile_braid", "compile_word", "expectations_from_state",
    "fidelity", "jordan_wigner", "logical_action", "monte_carlo_teleport", "reconstruct",
    "run_teleport", "spectrum",
]
__version__ = "0.1.0"
