import numpy as np
import pytest

from mzm_teleport.kitaev import (
    ChainSpec,
    build_hamiltonian,
    degeneracies,
    edge_fermion_dagger,
    fermion_annihilator,
    logical_states,
    logical_z,
    spectrum,
)
from mzm_teleport.pauli import PauliString


def levels(spec):
    return degeneracies(spectrum(spec), 1e-9)


def test_two_site_spectra():
    assert levels(ChainSpec(2, 1.0, "kitaev")) == [(0.0, 2), (1.0, 2)]
    assert levels(ChainSpec(2, 1.0, "trivial")) == [(0.0, 1), (1.0, 2), (2.0, 1)]


@pytest.mark.parametrize("n", range(2, 7))
def test_kitaev_levels_evenly_degenerate(n):
    assert all(m % 2 == 0 for _, m in levels(ChainSpec(n, 0.7, "kitaev")))


def test_shifted_convention():
    raw = build_hamiltonian(ChainSpec(2, 1.3, "kitaev", "raw"))
    shifted = build_hamiltonian(ChainSpec(2, 1.3, "kitaev", "shifted"))
    assert np.allclose(shifted, -1.3 * PauliString(0, "XX").to_matrix())
    assert np.allclose(shifted, 2 * raw - 1.3 * np.eye(4))


def test_raw_spectrum_counts_bond_occupations():
    # three bonds, each empty or filled, times the zero-mode doubling
    vals = np.sort(spectrum(ChainSpec(4, 2.0, "kitaev")))
    counts = sorted(2.0 * bin(k).count("1") for k in range(8) for _ in range(2))
    assert np.allclose(vals, counts)


def test_invalid_specs():
    for bad in (dict(N=1), dict(N=2, t=0), dict(N=2, kind="x"), dict(N=2, offset_convention="x")):
        with pytest.raises(ValueError):
            ChainSpec(**bad)
    with pytest.raises(ValueError):
        build_hamiltonian(ChainSpec(11))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_logical_states_are_ground_states(n):
    h = build_hamiltonian(ChainSpec(n, 1.0, "kitaev"))
    basis = logical_states(n)
    for s in (basis.zero_L, basis.one_L):
        v = s.amplitudes
        assert abs(np.vdot(v, h @ v)) < 1e-12
    assert abs(np.vdot(basis.zero_L.amplitudes, basis.one_L.amplitudes)) < 1e-12


def test_tilde_states_only_for_two_sites():
    b2 = logical_states(2)
    h = build_hamiltonian(ChainSpec(2, 1.0, "kitaev"))
    for s in (b2.tilde_zero_L, b2.tilde_one_L):
        assert abs(np.vdot(s.amplitudes, h @ s.amplitudes) - 1) < 1e-12
    assert logical_states(3).tilde_zero_L is None


def test_logical_z_and_edge_fermion():
    n = 3
    b = logical_states(n)
    z = logical_z(n).to_matrix()
    assert np.allclose(z @ b.zero_L.amplitudes, b.zero_L.amplitudes)
    assert np.allclose(z @ b.one_L.amplitudes, -b.one_L.amplitudes)
    f = edge_fermion_dagger(n)
    assert np.allclose(f @ f, 0)
    assert np.allclose(f @ f.conj().T + f.conj().T @ f, np.eye(2 ** n))
    h = build_hamiltonian(ChainSpec(n, 1.0, "kitaev"))
    assert np.allclose(h @ f, f @ h)


def test_site_fermions_anticommute():
    n = 3
    cs = [fermion_annihilator(k, n) for k in range(1, n + 1)]
    for i, a in enumerate(cs):
        for j, b in enumerate(cs):
            anti = a @ b.conj().T + b.conj().T @ a
            assert np.allclose(anti, np.eye(2 ** n) if i == j else 0)
