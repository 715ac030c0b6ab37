import numpy as np
import pytest
from hypothesis import given, strategies as st

from mzm_teleport.state import DensityMatrix
from mzm_teleport.tomography import (
    CLASSICAL_BOUND,
    BlochVector,
    expectations_from_state,
    fidelity,
    reconstruct,
    trace_distance,
)

unit = st.floats(-1, 1, allow_nan=False)


def ket(a, b):
    v = np.array([a, b], dtype=complex)
    return np.outer(v, v.conj()) / np.vdot(v, v).real


def test_named_expectations():
    assert expectations_from_state(ket(1, 0)) == BlochVector(0, 0, 1)
    assert expectations_from_state(np.eye(2) / 2) == BlochVector(0, 0, 0)
    b = expectations_from_state(ket(1, 1j))
    assert np.allclose(b.as_array(), [0, 1, 0])


def test_reconstruct_examples():
    assert np.allclose(reconstruct(BlochVector(0, 0, 1)).matrix, ket(1, 0))
    assert np.allclose(reconstruct(BlochVector(0, 0, 0)).matrix, np.eye(2) / 2)
    assert np.allclose(reconstruct(BlochVector(0, 0, 1.2)).matrix, ket(1, 0))
    with pytest.raises(ValueError):
        reconstruct(BlochVector(0, float("nan"), 0))


@given(unit, unit, unit)
def test_roundtrip_inside_ball(x, y, z):
    r = np.array([x, y, z])
    if np.linalg.norm(r) > 1:
        r = r / np.linalg.norm(r)
    rho = reconstruct(BlochVector(*r))
    assert rho.is_valid()
    back = expectations_from_state(rho)
    assert np.allclose(back.as_array(), r, atol=1e-12)


@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5))
def test_estimate_always_physical(x, y, z):
    rho = reconstruct(BlochVector(x, y, z))
    assert rho.is_valid() and abs(rho.trace() - 1) < 1e-12


def test_shots_validation():
    with pytest.raises(ValueError):
        expectations_from_state(ket(1, 0), shots=0, rng=np.random.default_rng(0))
    with pytest.raises(ValueError):
        expectations_from_state(ket(1, 0), shots=10)
    with pytest.raises(ValueError):
        expectations_from_state(np.eye(4))


def test_shot_noise_shrinks():
    rng = np.random.default_rng(0)
    rho = ket(np.cos(0.4), np.exp(0.3j) * np.sin(0.4))

    def median_error(shots):
        errs = [trace_distance(reconstruct(expectations_from_state(rho, shots, rng)), rho) for _ in range(100)]
        return np.median(errs)

    assert median_error(10 ** 5) < median_error(10 ** 3)


def test_fidelity_properties():
    psi = np.array([0.6, 0.8j])
    rho = DensityMatrix(1, np.outer(psi, psi.conj()))
    assert abs(fidelity(rho, psi) - 1) < 1e-12
    assert abs(fidelity(np.eye(2) / 2, [1, 1j]) - 0.5) < 1e-12
    assert abs(fidelity(rho, np.exp(0.7j) * psi) - 1) < 1e-12
    other = ket(1, -1)
    mix = 0.3 * rho.matrix + 0.7 * other
    assert abs(fidelity(mix, psi) - (0.3 * fidelity(rho, psi) + 0.7 * fidelity(other, psi))) < 1e-12
    with pytest.raises(ValueError):
        fidelity(rho, [1, 0, 0])
    assert CLASSICAL_BOUND == pytest.approx(2 / 3)
