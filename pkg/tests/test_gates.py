"""Analog gate designs: pulse-area formulas, schedules, reconstruction."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from lcqsim.gates import (
    GAP,
    HADAMARD,
    MIX_UNITARY,
    RATIO,
    T1_DEFAULT,
    T_EDGE,
    GateSchedule,
    berry_phase,
    calibrate_mixing_duration,
    cnot_schedule,
    compose_hadamard,
    controlled_phase_schedule,
    delay_pulse,
    design_mixing,
    design_not,
    design_phase_shift,
    mixing_angle,
    mixing_duration,
    multi_controlled_phase_schedule,
    not_duration,
    run_gate,
    snapshot_frequencies,
    state_from_amplitudes,
)
from lcqsim.network import (
    Bridge,
    Resonator,
    ResonatorNetwork,
    assemble_generator,
    extract_phase_amplitude,
    wrap_angle,
)
from lcqsim.pulses import PulseProfile, pulse_value

PI = math.pi


# =====================================================================
# Design formulas
# =====================================================================


def test_berry_phase_matches_quadrature():
    p = PulseProfile(0.08, 10 * PI, 25 * PI, T_EDGE)
    for t in (50.0, 120.0, 500.0):
        num, _ = quad(lambda s: pulse_value(p, s), 0.0, t, limit=400)
        assert berry_phase(p, 1.0, t) == pytest.approx(0.5 * num, abs=1e-10)


def test_berry_phase_warns_outside_adiabatic_regime():
    p = PulseProfile(0.5, 100.0, 200.0, T_EDGE)
    with pytest.warns(UserWarning):
        berry_phase(p, 1.0, 500.0)


def test_delay_pulse_length():
    p = delay_pulse(PI / 2, T1_DEFAULT)
    # t2 - t1 = 2 phi / ratio: a quarter turn at ratio 0.1 takes 10 pi
    assert p.t2 - p.t1 == pytest.approx(10.0 * PI, rel=1e-12)
    assert p.amplitude == RATIO


@pytest.mark.parametrize(
    "phi,stop",
    [(PI / 4, 15.0 * PI), (PI / 2, 20.0 * PI), (PI, 30.0 * PI)],
)
def test_phase_shift_switch_off_times(phi, stop):
    sched = design_phase_shift(phi)
    pulse = sched.network.resonators[0].pulses[0]
    assert pulse.t1 == pytest.approx(10.0 * PI)
    assert pulse.t2 == pytest.approx(stop, rel=1e-12)


def test_phase_shift_nominal_is_delay():
    sched = design_phase_shift(0.8)
    assert sched.nominal[0, 0] == pytest.approx(np.exp(-0.8j), abs=1e-12)


def test_bridge_durations():
    assert mixing_duration() == pytest.approx(5.0 * PI)
    assert not_duration() == pytest.approx(10.0 * PI)
    assert mixing_duration(0.05) == pytest.approx(10.0 * PI)


def test_design_validation():
    with pytest.raises(ValueError):
        design_phase_shift(-0.1)
    with pytest.raises(ValueError):
        design_phase_shift(PI / 2, ratio=0.5)
    with pytest.raises(ValueError):
        design_phase_shift(PI / 2, ratio=0.0)


def test_schedule_readout_validation():
    sched = design_phase_shift(PI / 2)
    pulse = sched.network.resonators[0].pulses[0]
    with pytest.raises(ValueError):
        GateSchedule(
            sched.network,
            sched.basis,
            sched.reference,
            sched.nominal,
            pulse.t2,  # still inside the switch-off edge
            "too-early",
        )


def test_schedule_reference_must_be_clean():
    pulse = delay_pulse(PI / 2, T1_DEFAULT)
    net = ResonatorNetwork(
        resonators=(Resonator(pulses=(pulse,)), Resonator(pulses=(pulse,))),
    )
    with pytest.raises(ValueError):
        GateSchedule(net, (0,), 1, np.eye(1, dtype=complex), 1000.0, "bad-ref")


# =====================================================================
# Exact bridge angle
# =====================================================================


def test_calibrated_plateau_hits_target_angle():
    for target in (PI / 4, PI / 2):
        dt = calibrate_mixing_duration(target)
        chi = mixing_angle(PulseProfile(RATIO, 0.0, dt, T_EDGE))
        assert chi == pytest.approx(target, abs=1e-10)


def test_calibrated_plateau_near_first_order_length():
    # the exact rate 0.5 (sqrt(1.2) - 1) is a bit under ratio/2, so the
    # calibrated quarter-turn plateau is slightly longer than 5 pi
    dt = calibrate_mixing_duration(PI / 4)
    assert 5.0 * PI < dt < 5.5 * PI


def test_first_order_not_pulse_under_rotates():
    chi = mixing_angle(PulseProfile(RATIO, 0.0, not_duration(), T_EDGE))
    assert 0.94 * PI / 2 < chi < PI / 2


# =====================================================================
# Mode structure
# =====================================================================


def test_snapshot_frequencies_match_generator_eigenvalues():
    pulse = PulseProfile(0.1, 100.0, 200.0, T_EDGE)
    net = ResonatorNetwork(
        resonators=(Resonator(), Resonator(), Resonator()),
        bridges=(Bridge(0, 1, pulse),),
    )
    for t in (0.0, 150.0, 400.0):
        pred = snapshot_frequencies(net, t)
        eig = np.sort(np.linalg.eigvals(assemble_generator(net, t)).imag)
        assert np.max(np.abs(pred - eig)) < 1e-9


def test_snapshot_splits_active_pair():
    pulse = PulseProfile(0.1, 100.0, 200.0, T_EDGE)
    net = ResonatorNetwork(
        resonators=(Resonator(), Resonator()),
        bridges=(Bridge(0, 1, pulse),),
    )
    f = snapshot_frequencies(net, 150.0)
    ell = math.sqrt(1.2)
    assert f.tolist() == pytest.approx([-ell, -1.0, 0.0, 1.0, ell], abs=1e-4)


# =====================================================================
# State embedding
# =====================================================================


@pytest.mark.parametrize("orientation", [1, -1])
def test_state_from_amplitudes_roundtrip(orientation):
    net = ResonatorNetwork(
        resonators=(Resonator(orientation=orientation), Resonator()),
    )
    alpha = 0.9 * np.exp(0.6j)
    st = state_from_amplitudes(net, {0: alpha, 1: 1.0 + 0j}, time=37.0)
    amp, theta = extract_phase_amplitude(st, net, 0)
    assert amp == pytest.approx(0.9, rel=1e-12)
    assert wrap_angle(theta - 0.6) == pytest.approx(0.0, abs=1e-10)


# =====================================================================
# End-to-end gate runs (frozen tolerances, short schedules only; the
# Hadamard and CNOT compositions run in the acceptance suite)
# =====================================================================


def test_phase_shift_run():
    report = run_gate(design_phase_shift(PI / 2))
    phase = -np.angle(report.reconstructed[0, 0])
    assert phase == pytest.approx(PI / 2, rel=0.02)
    assert abs(report.column_norms[0] - 1.0) < 0.01
    assert report.fidelity > 0.99
    # adiabatic modulation returns the energy it borrowed
    assert abs(report.energy_out[0] - report.energy_in[0]) / report.energy_in[0] < 1e-3


def test_mixing_run():
    report = run_gate(design_mixing())
    amps = np.abs(report.reconstructed[:, 0]) * report.column_norms[0]
    assert amps == pytest.approx([1.0 / math.sqrt(2.0)] * 2, rel=0.02)
    phases = np.angle(report.reconstructed[:, 0])
    assert abs(wrap_angle(phases[0] - PI / 4)) < 0.05
    assert abs(wrap_angle(phases[1] + PI / 4)) < 0.05
    assert report.fidelity > 0.99
    assert report.residual_bridge_current < 1e-3


def test_not_run_transfer():
    report = run_gate(design_not())
    # amplitude lands on the other resonator
    transfer = np.abs(report.reconstructed[1, 0])
    assert transfer > 0.97
    assert report.fidelity > 0.99


def test_two_delays_summing_to_full_turn_cancel():
    # a pi/2 delay followed by a 3 pi/2 delay is the identity
    p1 = delay_pulse(PI / 2, T1_DEFAULT)
    p2 = delay_pulse(3 * PI / 2, p1.t2 + GAP)
    net = ResonatorNetwork(resonators=(Resonator(pulses=(p1, p2)), Resonator()))
    sched = GateSchedule(
        net, (0,), 1, np.eye(1, dtype=complex), p2.t2 + 12.0 * T_EDGE, "full-turn"
    )
    report = run_gate(sched)
    assert abs(wrap_angle(np.angle(report.reconstructed[0, 0]))) < 0.05
    assert report.fidelity > 0.999


def test_schedule_nominals():
    assert np.allclose(design_mixing().nominal, MIX_UNITARY)
    assert np.allclose(design_not().nominal, np.array([[0, 1], [1, 0]]))
    assert np.allclose(compose_hadamard().nominal, HADAMARD)
    u_mix_sq = MIX_UNITARY @ MIX_UNITARY
    assert np.max(np.abs(u_mix_sq - np.array([[0, 1], [1, 0]]))) < 1e-12


def test_cnot_nominal_structure():
    sched = cnot_schedule()
    # swap of the two states whose control bit is set
    expected = np.eye(4, dtype=complex)[[0, 1, 3, 2]]
    assert np.allclose(sched.nominal, expected)
    # the bridge joins resonators 2 and 3
    b = sched.network.bridges[0]
    assert {b.u, b.v} == {2, 3}


def test_controlled_phase_nominal():
    phi = PI / 3
    sched = controlled_phase_schedule(phi)
    expected = np.diag([1.0, 1.0, 1.0, np.exp(1j * phi)])
    assert np.allclose(sched.nominal, expected)
    # realized by a delay pulse of 2 pi - phi on the all-ones resonator
    pulses = sched.network.resonators[3].pulses
    assert len(pulses) == 1
    assert pulses[0].t2 - pulses[0].t1 == pytest.approx(2.0 * (2.0 * PI - phi) / RATIO)


def test_multi_controlled_phase_pulse_placement():
    phi = PI
    sched = multi_controlled_phase_schedule(3, (1, 2, 3), phi)
    # only the all-ones index 7 is pulsed for the full controlled set
    for j, r in enumerate(sched.network.resonators[:8]):
        if j == 7:
            assert len(r.pulses) == 1
        else:
            assert r.pulses == ()
    mask_sched = multi_controlled_phase_schedule(3, (1, 2), phi)
    pulsed = [j for j, r in enumerate(mask_sched.network.resonators[:8]) if r.pulses]
    # qubits 1 and 2 set, qubit 3 free: indices 110 and 111
    assert pulsed == [6, 7]
