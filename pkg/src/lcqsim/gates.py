"""Analog gate schedules on resonator networks.

A gate schedule pairs a network (computational resonators plus one
untouched reference resonator) with the unitary it is meant to realize
and a readout time.  Gates are driven by two pulse types:

* capacitance-ratio pulses detune one resonator, accumulating a phase
  DELAY delta = omega0 * area / 2 relative to the reference; a delay of
  delta multiplies that resonator's amplitude by e^{-i delta}, so a
  requested phase advance phi is lowered to a delay of (-phi) mod 2pi;

* bridge pulses couple a resonator pair, rotating amplitude between the
  two at instantaneous rate omega0 (sqrt(1 + 2 L Gamma) - 1) / 2; a
  quarter-turn (pi/4) splits evenly, a half-turn (pi/2) swaps.

All designs use natural units omega0 = L = C = 1 and the plateau values
ratio = 0.1 for both pulse types, with edge width T = 10.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .network import (
    AnalogState,
    Bridge,
    DegenerateAmplitudeError,
    Resonator,
    ResonatorNetwork,
    SimConfig,
    Trajectory,
    extract_phase_amplitude,
    integrate,
    total_energy,
    wrap_angle,
)
from .pulses import PulseProfile, pulse_area, pulse_value

__all__ = [
    "RATIO",
    "T_EDGE",
    "T1_DEFAULT",
    "GateSchedule",
    "AnalogGateReport",
    "berry_phase",
    "delay_pulse",
    "design_phase_shift",
    "design_mixing",
    "design_not",
    "compose_hadamard",
    "cnot_schedule",
    "controlled_phase_schedule",
    "multi_controlled_phase_schedule",
    "mixing_angle",
    "calibrate_mixing_duration",
    "snapshot_frequencies",
    "state_from_amplitudes",
    "run_gate",
    "report_to_json_dict",
]

RATIO = 0.1
T_EDGE = 10.0
T1_DEFAULT = 10.0 * np.pi
GAP = 10.0 * T_EDGE

MIX_UNITARY = np.array(
    [
        [np.exp(1j * np.pi / 4), np.exp(-1j * np.pi / 4)],
        [np.exp(-1j * np.pi / 4), np.exp(1j * np.pi / 4)],
    ]
) / np.sqrt(2.0)

HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)


# =====================================================================
# Schedules
# =====================================================================


@dataclass(frozen=True, eq=False)
class GateSchedule:
    """Network plus intent.  `basis` lists the resonator index of each
    computational basis state; `reference` is a pulse-free resonator
    whose steady oscillation defines the phase origin at readout."""

    network: ResonatorNetwork
    basis: tuple[int, ...]
    reference: int
    nominal: np.ndarray
    readout_time: float
    label: str = ""

    def __post_init__(self) -> None:
        n = self.network.n_resonators
        if not (0 <= self.reference < n) or self.reference in self.basis:
            raise ValueError("reference must be a resonator outside the basis")
        ref = self.network.resonators[self.reference]
        if ref.pulses:
            raise ValueError("reference resonator must carry no pulses")
        for b in self.network.bridges:
            if self.reference in (b.u, b.v):
                raise ValueError("reference resonator must not be bridged")
        if self.nominal.shape != (len(self.basis), len(self.basis)):
            raise ValueError("nominal unitary shape does not match basis")
        last = 0.0
        edge = T_EDGE
        for r in self.network.resonators:
            for p in r.pulses:
                last = max(last, p.t2 + 10.0 * p.T)
                edge = max(edge, p.T)
        for b in self.network.bridges:
            last = max(last, b.pulse.t2 + 10.0 * b.pulse.T)
        if self.readout_time < last:
            raise ValueError(
                f"readout at {self.readout_time} inside pulse activity ending ~{last}"
            )


def _standard_network(n_states: int, res_pulses, bridges) -> ResonatorNetwork:
    """n_states unit resonators with given pulse lists, plus a trailing
    reference resonator."""
    rs = tuple(
        Resonator(pulses=tuple(res_pulses.get(j, ()))) for j in range(n_states)
    ) + (Resonator(),)
    return ResonatorNetwork(rs, tuple(bridges))


# =====================================================================
# Pulse-level design formulas
# =====================================================================


def berry_phase(pulse: PulseProfile, base_capacitance: float, t: float, omega0: float = 1.0) -> float:
    """Adiabatic phase delay accumulated by time t under a capacitance
    pulse, in closed form:

        delta(t) = omega0 * area(pulse, t) / (2 * base_capacitance)

    For a ratio pulse (amplitude already divided by the capacitance) pass
    base_capacitance 1.  Warns when the relative modulation exceeds 0.3,
    where the slow-modulation picture degrades.
    """
    if pulse.amplitude / base_capacitance > 0.3:
        warnings.warn(
            "capacitance modulation above 0.3 of base, phase formula strained",
            stacklevel=2,
        )
    return omega0 * pulse_area(pulse, t) / (2.0 * base_capacitance)


def delay_pulse(delay: float, t1: float, ratio: float = RATIO, T: float = T_EDGE) -> PulseProfile:
    """Capacitance-ratio pulse producing a given phase delay >= 0:
    t2 = t1 + 2 delay / (ratio omega0)."""
    if delay < 0:
        raise ValueError("delay must be >= 0")
    return PulseProfile(ratio, t1, t1 + 2.0 * delay / ratio, T)


def design_phase_shift(
    phi: float, ratio: float = RATIO, t1: float = T1_DEFAULT, T: float = T_EDGE
) -> GateSchedule:
    """One resonator delayed by phi >= 0 against the reference."""
    if not (0.0 < ratio <= 0.3):
        raise ValueError("ratio must lie in (0, 0.3]")
    if phi < 0:
        raise ValueError("phase shift must be >= 0")
    p = delay_pulse(phi, t1, ratio, T)
    nominal = np.array([[np.exp(-1j * phi)]])
    return GateSchedule(
        _standard_network(1, {0: [p]}, []),
        (0,),
        1,
        nominal,
        p.t2 + 12.0 * T,
        label="phase-shift",
    )


def mixing_duration(ratio: float = RATIO) -> float:
    """Plateau length for an even split, from the first-order rate
    omega0 ratio / 2: angle pi/4 at 0.1 gives 5 pi."""
    return np.pi / (2.0 * ratio)


def not_duration(ratio: float = RATIO) -> float:
    """Plateau length for a full swap, twice the mixing length."""
    return np.pi / ratio


def _bridge_schedule(duration: float, nominal: np.ndarray, label: str, ratio: float,
                     t1: float, T: float) -> GateSchedule:
    pulse = PulseProfile(ratio, t1, t1 + duration, T)
    network = _standard_network(2, {}, [Bridge(0, 1, pulse)])
    return GateSchedule(network, (0, 1), 2, nominal, pulse.t2 + 12.0 * T, label=label)


def design_mixing(ratio: float = RATIO, t1: float = T1_DEFAULT, T: float = T_EDGE) -> GateSchedule:
    """Even beam-splitter between two resonators."""
    return _bridge_schedule(mixing_duration(ratio), MIX_UNITARY, "mixing", ratio, t1, T)


def design_not(ratio: float = RATIO, t1: float = T1_DEFAULT, T: float = T_EDGE) -> GateSchedule:
    """Full amplitude swap between two resonators."""
    nominal = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    return _bridge_schedule(not_duration(ratio), nominal, "not", ratio, t1, T)


def compose_hadamard(ratio: float = RATIO, t1: float = T1_DEFAULT, T: float = T_EDGE) -> GateSchedule:
    """Hadamard as delay(3pi/2) . mixing . delay(3pi/2) on the second
    resonator; the delays realize diag(1, i) and the product equals the
    Hadamard up to a global phase."""
    p1 = delay_pulse(1.5 * np.pi, t1, ratio, T)
    b1 = p1.t2 + GAP
    bridge = PulseProfile(ratio, b1, b1 + mixing_duration(ratio), T)
    p2 = delay_pulse(1.5 * np.pi, bridge.t2 + GAP, ratio, T)
    network = _standard_network(2, {1: [p1, p2]}, [Bridge(0, 1, bridge)])
    return GateSchedule(
        network, (0, 1), 2, HADAMARD.astype(complex), p2.t2 + 12.0 * T, label="hadamard"
    )


def cnot_schedule(ratio: float = RATIO, t1: float = T1_DEFAULT, T: float = T_EDGE) -> GateSchedule:
    """Two-qubit CNOT (control 1, target 2): a swap bridge between the
    10 and 11 resonators."""
    pulse = PulseProfile(ratio, t1, t1 + not_duration(ratio), T)
    network = _standard_network(4, {}, [Bridge(2, 3, pulse)])
    nominal = np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    )
    return GateSchedule(network, (0, 1, 2, 3), 4, nominal, pulse.t2 + 12.0 * T, label="cnot")


def controlled_phase_schedule(
    phi: float, ratio: float = RATIO, t1: float = T1_DEFAULT, T: float = T_EDGE
) -> GateSchedule:
    """Two-qubit controlled phase diag(1,1,1,e^{i phi}): the 11 resonator
    is delayed by (-phi) mod 2pi."""
    delay = float(np.mod(-phi, 2.0 * np.pi))
    p = delay_pulse(delay, t1, ratio, T)
    network = _standard_network(4, {3: [p]}, [])
    nominal = np.diag([1.0, 1.0, 1.0, np.exp(1j * phi)]).astype(complex)
    return GateSchedule(
        network, (0, 1, 2, 3), 4, nominal, p.t2 + 12.0 * T, label="controlled-phase"
    )


def multi_controlled_phase_schedule(
    n_qubits: int,
    qubits,
    phi: float,
    ratio: float = RATIO,
    t1: float = T1_DEFAULT,
    T: float = T_EDGE,
) -> GateSchedule:
    """Phase e^{i phi} on every basis state where all listed qubits are 1,
    one identical delay pulse per matching resonator."""
    qs = tuple(sorted(set(qubits)))
    if qs != tuple(sorted(qubits)):
        raise ValueError("repeated qubit")
    for s in qs:
        if not (1 <= s <= n_qubits):
            raise ValueError(f"qubit {s} out of range 1..{n_qubits}")
    dim = 2 ** n_qubits
    mask = 0
    for s in qs:
        mask |= 1 << (n_qubits - s)
    delay = float(np.mod(-phi, 2.0 * np.pi))
    pulses = {j: [delay_pulse(delay, t1, ratio, T)] for j in range(dim) if (j & mask) == mask}
    diag = np.where((np.arange(dim) & mask) == mask, np.exp(1j * phi), 1.0 + 0j)
    network = _standard_network(dim, pulses, [])
    t2 = t1 + 2.0 * delay / ratio
    return GateSchedule(
        network,
        tuple(range(dim)),
        dim,
        np.diag(diag),
        t2 + 12.0 * T,
        label="multi-controlled-phase",
    )


# =====================================================================
# Bridge calibration
# =====================================================================


def mixing_angle(pulse: PulseProfile, L: float = 1.0, omega0: float = 1.0) -> float:
    """Exact rotation angle of a bridge pulse,

        chi = omega0 int (sqrt(1 + 2 L Gamma(t)) - 1) / 2 dt,

    by quadrature over the pulse support."""
    lo = pulse.t1 - 12.0 * pulse.T
    hi = pulse.t2 + 12.0 * pulse.T

    def rate(t):
        g = pulse_value(pulse, t)
        return 0.5 * omega0 * (np.sqrt(1.0 + 2.0 * L * g) - 1.0)

    val, _ = quad(rate, lo, hi, limit=400)
    return float(val)


def calibrate_mixing_duration(
    target: float,
    amplitude: float = RATIO,
    T: float = T_EDGE,
    L: float = 1.0,
    omega0: float = 1.0,
) -> float:
    """Plateau length t2 - t1 whose exact rotation angle equals target.

    The first-order design underestimates the angle per unit area (the
    rate is concave in Gamma) and the smooth edges overshoot it, so the
    exact length sits near but not at the first-order value.
    """
    rate0 = 0.5 * omega0 * (np.sqrt(1.0 + 2.0 * L * amplitude) - 1.0)
    guess = target / rate0

    def err(dt):
        return mixing_angle(PulseProfile(amplitude, 0.0, dt, T), L, omega0) - target

    lo, hi = 0.25 * guess, 4.0 * guess + 40.0 * T
    return float(brentq(err, lo, hi, xtol=1e-12))


# =====================================================================
# Diagnostics
# =====================================================================


def snapshot_frequencies(network: ResonatorNetwork, t: float) -> np.ndarray:
    """Instantaneous normal-mode frequencies, sorted.  Each resonator
    contributes +-omega0; an active bridge turns its pair's second
    +-omega0 into +-l omega0 with l = sqrt(1 + 2 L Gamma), and every
    bridge contributes one zero mode.  Matches the imaginary parts of
    the eigenvalues of the instantaneous generator.
    """
    from .network import BRIDGE_GAMMA_FLOOR

    freqs: list[float] = []
    used = [network.resonators[j].omega0 for j in range(network.n_resonators)]
    consumed = [False] * network.n_resonators
    for b, br in enumerate(network.bridges):
        freqs.append(0.0)
        gamma = network.bridge_gamma(b, t)
        if gamma < BRIDGE_GAMMA_FLOOR:
            continue
        wu, wv = used[br.u], used[br.v]
        if abs(wu - wv) > 1e-9 * wu or consumed[br.u] or consumed[br.v]:
            raise ValueError("snapshot needs one active bridge per equal-frequency pair")
        L = network.resonators[br.u].L
        ell = np.sqrt(1.0 + 2.0 * L * gamma)
        freqs.extend([ell * wu, -ell * wu])
        consumed[br.u] = True  # the pair's antisymmetric mode replaces one +-omega0
    for j in range(network.n_resonators):
        if not consumed[j]:
            freqs.extend([used[j], -used[j]])
    return np.sort(np.array(freqs))


# =====================================================================
# Execution
# =====================================================================


def state_from_amplitudes(
    network: ResonatorNetwork, amplitudes: dict[int, complex], time: float = 0.0
) -> AnalogState:
    """Oscillating state with given complex amplitudes alpha_j, meaning
    V_j(t) = |alpha_j| cos(omega0 t + arg alpha_j)."""
    state = AnalogState.zero(network, time)
    for j, alpha in amplitudes.items():
        r = network.resonators[j]
        rot = alpha * np.exp(1j * r.omega0 * time)
        state.voltages[j] = rot.real
        state.inductor_currents[j] = r.orientation * np.sqrt(r.C / r.L) * rot.imag
    return state


@dataclass(frozen=True, eq=False)
class AnalogGateReport:
    label: str
    nominal: np.ndarray
    reconstructed: np.ndarray
    fidelity: float
    unitarity_error: float
    column_norms: np.ndarray
    residual_bridge_current: float
    readout_time: float
    energy_in: np.ndarray
    energy_out: np.ndarray
    trajectories: tuple[Trajectory, ...] = ()


def run_gate(
    schedule: GateSchedule,
    step_size: float | None = None,
    keep_trajectories: bool = False,
) -> AnalogGateReport:
    """Simulate the schedule once per basis state and reconstruct the
    realized unitary column by column.

    Each run starts the chosen basis resonator and the reference at unit
    amplitude, phase zero.  At readout the reference phase is subtracted
    from every extracted phase, columns are normalized, and the fidelity
    |tr(nominal^dag reconstructed)| / dim is computed.
    """
    from .network import DEFAULT_STEP

    h = DEFAULT_STEP if step_size is None else step_size
    net = schedule.network
    dim = len(schedule.basis)
    u_rec = np.zeros((dim, dim), dtype=complex)
    norms = np.zeros(dim)
    e_in = np.zeros(dim)
    e_out = np.zeros(dim)
    resid = 0.0
    trajs: list[Trajectory] = []
    for col in range(dim):
        init = state_from_amplitudes(
            net, {schedule.basis[col]: 1.0 + 0j, schedule.reference: 1.0 + 0j}
        )
        if keep_trajectories:
            n_steps = int(np.ceil(schedule.readout_time / h))
            stride = max(1, n_steps // 4000)
        else:
            stride = 0
        traj = integrate(net, init, SimConfig(h, schedule.readout_time, stride))
        final = traj.final
        if keep_trajectories:
            trajs.append(traj)
        e_in[col] = total_energy(init, net)
        e_out[col] = total_energy(final, net)
        _, theta_ref = extract_phase_amplitude(final, net, schedule.reference)
        col_amp = np.zeros(dim)
        col_phase = np.zeros(dim)
        for row, j in enumerate(schedule.basis):
            try:
                a, th = extract_phase_amplitude(final, net, j)
            except DegenerateAmplitudeError:
                a, th = 0.0, 0.0
            col_amp[row] = a
            col_phase[row] = wrap_angle(th - theta_ref) if a > 0 else 0.0
        norms[col] = np.sqrt(np.sum(col_amp ** 2))
        u_rec[:, col] = (col_amp / norms[col]) * np.exp(1j * col_phase)
        if net.n_bridges:
            resid = max(resid, float(np.max(np.abs(final.bridge_currents))))
    fidelity = float(np.abs(np.trace(schedule.nominal.conj().T @ u_rec)) / dim)
    unitarity = float(
        np.linalg.norm(u_rec.conj().T @ u_rec - np.eye(dim), 2)
    )
    return AnalogGateReport(
        label=schedule.label,
        nominal=schedule.nominal,
        reconstructed=u_rec,
        fidelity=fidelity,
        unitarity_error=unitarity,
        column_norms=norms,
        residual_bridge_current=resid,
        readout_time=schedule.readout_time,
        energy_in=e_in,
        energy_out=e_out,
        trajectories=tuple(trajs),
    )


def _complex_matrix_dict(m: np.ndarray) -> dict:
    return {"re": m.real.tolist(), "im": m.imag.tolist()}


def report_to_json_dict(report: AnalogGateReport) -> dict:
    return {
        "label": report.label,
        "fidelity": report.fidelity,
        "unitarity_error": report.unitarity_error,
        "column_norms": report.column_norms.tolist(),
        "residual_bridge_current": report.residual_bridge_current,
        "readout_time": report.readout_time,
        "energy_in": report.energy_in.tolist(),
        "energy_out": report.energy_out.tolist(),
        "nominal": _complex_matrix_dict(report.nominal),
        "reconstructed": _complex_matrix_dict(report.reconstructed),
    }
