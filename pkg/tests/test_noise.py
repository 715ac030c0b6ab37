import math

import numpy as np
import pytest

from mzm_teleport.noise import (
    TABLE_SIGMA_D,
    TABLE_T2_STAR,
    McEstimate,
    NoiseParams,
    apply_dephasing,
    closed_form_gate_fidelity,
    derive_sigma_d,
    draw_rng,
    fidelities_from_draws,
    jitter,
    mc_cz_gate_fidelity,
    mc_single_gate_fidelity,
    midpoint_cut,
    monte_carlo_teleport,
    sample_noisy_cz,
    sample_noisy_single,
    teleport_draws,
)
from mzm_teleport.state import StateVector, cz, h, run, rx
from mzm_teleport.teleport import NAMED_STATES, SIX_STATES, ideal_program


def test_sigma_d_rule():
    got = derive_sigma_d(dict(enumerate(TABLE_T2_STAR, 1)), 0.15)
    assert [round(got[q], 5) for q in range(1, 9)] == list(TABLE_SIGMA_D)
    with pytest.raises(ValueError):
        derive_sigma_d({1: 0.0}, 0.1)
    with pytest.raises(ValueError):
        derive_sigma_d({1: 1.0}, -0.1)


def test_params_validation():
    with pytest.raises(ValueError):
        NoiseParams(sigma_g={1: -0.1})
    with pytest.raises(ValueError):
        NoiseParams(dephasing_policy="always")
    assert NoiseParams(sigma_cz={(3, 2): 0.1}).sigma_cz == {(2, 3): 0.1}
    assert NoiseParams.zero().is_zero()
    with pytest.raises(ValueError):
        NoiseParams(sigma_g={9: 0.1}).check_qubits(8)


def test_closed_form_values():
    assert round(closed_form_gate_fidelity(0.016), 4) == 0.9994
    assert round(closed_form_gate_fidelity(0.08287), 4) == 0.9833
    assert closed_form_gate_fidelity(0.0) == 1.0


@pytest.mark.parametrize("sigma", [0.016, 0.08287, 0.3])
def test_mc_gate_fidelity_tracks_closed_form(sigma):
    rng = np.random.default_rng(11)
    for fn in (mc_single_gate_fidelity, mc_cz_gate_fidelity):
        mean, se = fn(sigma, 4000, rng)
        assert abs(mean - closed_form_gate_fidelity(sigma)) < 4 * se + 1e-12


def test_samplers():
    rng = np.random.default_rng(0)
    assert sample_noisy_single(rx(1, 1.0), 0.0, rng) == [rx(1, 1.0)]
    assert len(sample_noisy_single(h(2), 0.1, rng)) == 4
    assert sample_noisy_cz(cz(1, 2), 0.1, rng)[1].qubits == (2,)
    with pytest.raises(ValueError):
        sample_noisy_single(cz(1, 2), 0.1, rng)
    with pytest.raises(ValueError):
        sample_noisy_cz(h(1), 0.1, rng)


def test_noisy_hadamard_rotates_about_its_axis():
    # any rotation about the H axis leaves the state's component along that axis alone
    rng = np.random.default_rng(4)
    gates = sample_noisy_single(h(1), 0.2, rng)
    u = run(StateVector.zeros(1), gates).amplitudes
    axis = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    assert abs(np.vdot(u, axis @ u).real - np.vdot([1, 0], axis @ [1, 0]).real) < 1e-12


def test_dephasing_zero_is_noop():
    gates = [h(1), cz(1, 2)]
    p = NoiseParams(sigma_d={1: 0.0, 2: 0.0})
    assert apply_dephasing(gates, 2, p, np.random.default_rng(0)) == gates


def test_midpoint_pulse_decays_coherence():
    sigma = 0.15
    p = NoiseParams(sigma_d={1: sigma})
    vals = []
    for k in range(4000):
        gates = apply_dephasing([h(1), rx(1, 0.0)], 1, p, draw_rng(3, k))
        psi = run(StateVector.zeros(1), gates).amplitudes
        vals.append(2 * (psi[0].conj() * psi[1]).real)
    want = math.exp(-(math.pi * sigma) ** 2 / 2)
    assert abs(want - 0.8949) < 1e-4
    assert abs(np.mean(vals) - want) < 4 * np.std(vals) / math.sqrt(len(vals))


def test_per_moment_preserves_total_variance():
    p = NoiseParams(sigma_d={1: 0.2}, dephasing_policy="per_moment")
    gates = [rx(1, 0.0)] * 9
    totals = []
    for k in range(3000):
        out = apply_dephasing(gates, 1, p, draw_rng(5, k))
        totals.append(sum(g.angle for g in out if g.kind == "RZ") / math.pi)
    assert abs(np.std(totals) - 0.2) < 0.01


def test_midpoint_lands_between_logical_steps():
    prog = ideal_program()
    assert midpoint_cut(prog.prefix, 8, prog.seams) == 30
    assert midpoint_cut(prog.prefix, 8) == 17


def test_jitter_keeps_phases_and_counts():
    p = NoiseParams.from_tables()
    out = jitter(ideal_program().prefix, p, np.random.default_rng(0))
    assert sum(g.kind == "GPHASE" for g in out) == sum(g.kind == "GPHASE" for g in ideal_program().prefix)


def test_estimate_stderr():
    e = McEstimate.from_samples([0.0, 1.0, 0.0, 1.0], seed=1)
    assert e.mean == 0.5 and abs(e.stderr - np.std([0, 1, 0, 1], ddof=1) / 2) < 1e-15
    assert math.isnan(McEstimate.from_samples([], seed=1).mean)


def test_zero_noise_gives_unit_fidelity():
    ns, es = monte_carlo_teleport("+i", NoiseParams.zero(), 3, seed=0)
    assert ns.mean == pytest.approx(1, abs=1e-12) and es.mean == pytest.approx(1, abs=1e-12)
    tiny = NoiseParams.uniform(1e-6, 1e-6, 1e-6)
    ns, es = monte_carlo_teleport("-", tiny, 5, seed=0)
    assert abs(ns.mean - 1) < 1e-6 and abs(es.mean - 1) < 1e-6


def test_serial_and_parallel_agree():
    p = NoiseParams.from_tables()
    a = teleport_draws(p, 6, seed=9, workers=1)
    b = teleport_draws(p, 6, seed=9, workers=3)
    for (x1, y1), (x2, y2) in zip(a, b):
        assert np.array_equal(x1, x2) and np.array_equal(y1, y2)


def test_dephasing_only_es_beats_ns():
    p = NoiseParams(sigma_d={q: 0.15 for q in range(1, 9)})
    blocks = teleport_draws(p, 1000, seed=2)
    ns_avg = es_avg = 0.0
    for label in SIX_STATES:
        ns, es = fidelities_from_draws(blocks, NAMED_STATES[label], seed=2)
        ns_avg += ns.mean / 6
        es_avg += es.mean / 6
    assert es_avg >= ns_avg


def test_draws_validated():
    with pytest.raises(ValueError):
        teleport_draws(NoiseParams.zero(), 0, seed=0)
