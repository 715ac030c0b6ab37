import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mzm_teleport.pauli import PauliString
from mzm_teleport.state import (
    HADAMARD,
    DensityMatrix,
    GateOp,
    StateVector,
    apply,
    cz,
    expectation,
    gphase,
    h,
    partial_trace,
    pauli_gate,
    project,
    reduced_from_vector,
    rotation,
    run,
    rx,
    ry,
    rz,
)

angles = st.floats(-2 * math.pi, 2 * math.pi, allow_nan=False)


def dense(gate: GateOp, n: int) -> np.ndarray:
    """Kronecker-product oracle for a single gate."""
    eye = np.eye(2)
    if gate.kind == "CZ":
        diag = [(-1) ** (((k >> (n - gate.qubits[0])) & 1) * ((k >> (n - gate.qubits[1])) & 1)) for k in range(2 ** n)]
        return np.diag(diag).astype(complex)
    m = HADAMARD if gate.kind == "H" else rotation(gate.kind[1], gate.angle)
    out = np.array([[1]], dtype=complex)
    for q in range(1, n + 1):
        out = np.kron(out, m if q == gate.qubits[0] else eye)
    return out


def random_state(rng, n):
    v = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
    return StateVector(n, v / np.linalg.norm(v))


def test_rotation_convention():
    assert np.allclose(rotation("Z", math.pi / 2), np.diag([np.exp(1j * math.pi / 4), np.exp(-1j * math.pi / 4)]))
    assert np.allclose(rotation("X", math.pi), 1j * np.array([[0, 1], [1, 0]]))


@given(angles, st.sampled_from(["RX", "RY", "RZ"]), st.integers(1, 3))
@settings(max_examples=60)
def test_single_qubit_kernel_matches_kron(theta, kind, q):
    rng = np.random.default_rng(0)
    s = random_state(rng, 3)
    g = GateOp(kind, (q,), theta)
    assert np.allclose(apply(s, g).amplitudes, dense(g, 3) @ s.amplitudes)


def test_cz_and_h_kernels():
    rng = np.random.default_rng(1)
    s = random_state(rng, 3)
    for g in (cz(1, 3), cz(2, 1), h(2)):
        assert np.allclose(apply(s, g).amplitudes, dense(g, 3) @ s.amplitudes)


def test_norm_preserved():
    rng = np.random.default_rng(2)
    s = random_state(rng, 4)
    gates = [h(1), cz(1, 2), rx(3, 0.3), ry(4, -1.2), rz(2, 2.2), gphase(0.7)]
    assert abs(run(s, gates).norm2() - 1) < 1e-12


def test_qubit_range_checked():
    with pytest.raises(IndexError):
        apply(StateVector.zeros(2), h(3))
    with pytest.raises(ValueError):
        GateOp("CZ", (1, 1))
    with pytest.raises(ValueError):
        GateOp("FOO", (1,))


def test_pauli_gate_and_expectation():
    s = StateVector.from_label("00")
    s = run(s, [h(1), cz(1, 2)])
    assert abs(expectation(s, PauliString(0, "XZ")) - 1) < 1e-12
    flipped = apply(s, pauli_gate(PauliString(0, "ZI")))
    assert abs(expectation(flipped, PauliString(0, "XZ")) + 1) < 1e-12
    with pytest.raises(ValueError):
        expectation(s, PauliString(1, "XZ"))


def test_projection_is_unnormalised():
    s = StateVector.product([[1 / math.sqrt(2), 1 / math.sqrt(2)], [1, 0]])
    p = project(s, 1, 1)
    assert abs(p.norm2() - 0.5) < 1e-12
    with pytest.raises(ValueError):
        project(s, 1, 2)


def test_text_roundtrip():
    for g in (rx(1, 0.1), ry(2, -math.pi / 2), rz(3, 1e-17), cz(1, 2), h(4), gphase(-0.25),
              pauli_gate(PauliString(3, "XIZY"))):
        assert GateOp.from_text(g.to_text()) == g


def test_partial_trace_agrees():
    rng = np.random.default_rng(3)
    s = random_state(rng, 3)
    a = reduced_from_vector(s, [2])
    b = partial_trace(s.density(), [2])
    assert np.allclose(a.matrix, b.matrix)
    assert a.is_valid()


def test_bell_pair_reduced_is_mixed():
    s = run(StateVector.zeros(2), [h(1), h(2), cz(1, 2), h(2)])
    rho = reduced_from_vector(s, [1])
    assert np.allclose(rho.matrix, np.eye(2) / 2)


def test_density_serialisation():
    rho = DensityMatrix(1, [[0.5, 0.5j], [-0.5j, 0.5]])
    back = DensityMatrix.loads(rho.dumps())
    assert np.array_equal(back.matrix, rho.matrix)
    assert not DensityMatrix(1, [[1, 1], [1, 1]]).is_valid()


def test_batched_kernel_matches_loop():
    from mzm_teleport.state import apply_gate

    rng = np.random.default_rng(4)
    batch = rng.normal(size=(2, 2, 2, 5)) + 0j
    g = ry(2, 0.4)
    got = apply_gate(batch, g, 3)
    for k in range(5):
        single = StateVector(3, batch[..., k].reshape(-1))
        assert np.allclose(got[..., k].reshape(-1), apply(single, g).amplitudes)
