"""Time-varying linear circuit model for networks of LC resonators.

A network is a list of resonators (inductance L, base capacitance C, an
optional set of capacitance-ratio pulses) plus inductive bridges between
resonator pairs, each carrying an inverse-inductance pulse.  The state
vector concatenates

    x = [resonator currents | bridge currents | voltages]

and evolves by dx/dt = A(t) x with A(t) assembled from Kirchhoff's laws:

    dI_j/dt = sigma_j V_j / L_j
    dI_b/dt = Gamma_b(t) (V_v - V_u)          for a bridge u -> v
    dV_j/dt = eta_j(t) (-sigma_j I_j + sum_in I_b - sum_out I_b)

sigma_j is the current-orientation sign of resonator j.  eta_j(t) is the
effective elastance.  Capacitance pulses use a frequency-linear model: a
pulse of ratio c(t) shifts the instantaneous frequency to

    omega(t) = omega_0 (1 - c(t)/2),

implemented as eta_j(t) = (1/C_j)(1 - c(t)/2)^2.  To first order in c this
coincides with a literal capacitance modulation C_j (1 + c), but it makes
pulse-area phase designs exact rather than approximate, which is the
idealization this package commits to (a varactor-style modulation tuned in
frequency rather than in capacitance).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .pulses import PulseProfile, pulse_value

__all__ = [
    "Resonator",
    "Bridge",
    "ResonatorNetwork",
    "AnalogState",
    "SimConfig",
    "Trajectory",
    "IntegrationError",
    "StrandedBridgeCurrentError",
    "DegenerateAmplitudeError",
    "assemble_generator",
    "integrate",
    "total_energy",
    "extract_phase_amplitude",
    "to_wavefunction",
    "wrap_angle",
    "network_to_json_dict",
    "network_from_json_dict",
    "trajectory_csv_rows",
]

DEFAULT_STEP = 2.0 * np.pi / 1000.0
BRIDGE_GAMMA_FLOOR = 1e-9
STRANDED_CURRENT_TOL = 1e-3
DEGENERATE_AMPLITUDE_TOL = 1e-9


class IntegrationError(RuntimeError):
    """A trajectory produced a non-finite state entry."""


class StrandedBridgeCurrentError(RuntimeError):
    """A bridge holds current while its inverse inductance is off."""


class DegenerateAmplitudeError(RuntimeError):
    """Oscillation amplitude too small for a phase to be defined."""


# =====================================================================
# Network description
# =====================================================================


@dataclass(frozen=True)
class Resonator:
    """One LC loop.  `pulses` are capacitance-ratio windows; overlapping
    windows add their ratios."""

    L: float = 1.0
    C: float = 1.0
    orientation: int = 1
    pulses: tuple[PulseProfile, ...] = ()

    def __post_init__(self) -> None:
        if not (self.L > 0 and self.C > 0):
            raise ValueError("resonator needs L > 0 and C > 0")
        if self.orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")

    @property
    def omega0(self) -> float:
        return 1.0 / np.sqrt(self.L * self.C)


@dataclass(frozen=True)
class Bridge:
    """Inductive link between resonators u and v carrying one
    inverse-inductance pulse Gamma(t)."""

    u: int
    v: int
    pulse: PulseProfile

    def __post_init__(self) -> None:
        if self.u == self.v:
            raise ValueError("bridge endpoints must differ")


@dataclass(frozen=True)
class ResonatorNetwork:
    resonators: tuple[Resonator, ...]
    bridges: tuple[Bridge, ...] = ()

    def __post_init__(self) -> None:
        n = len(self.resonators)
        if n == 0:
            raise ValueError("network needs at least one resonator")
        for b in self.bridges:
            if not (0 <= b.u < n and 0 <= b.v < n):
                raise ValueError(f"bridge ({b.u},{b.v}) out of range for {n} resonators")
        self._check_pair_overlap()

    def _check_pair_overlap(self) -> None:
        # at most one bridge per unordered pair may be active at a time;
        # windows padded by 3T count as active
        seen: dict[tuple[int, int], list[tuple[float, float]]] = {}
        for b in self.bridges:
            key = (min(b.u, b.v), max(b.u, b.v))
            lo = b.pulse.t1 - 3.0 * b.pulse.T
            hi = b.pulse.t2 + 3.0 * b.pulse.T
            for (plo, phi) in seen.setdefault(key, []):
                if lo < phi and plo < hi:
                    raise ValueError(f"overlapping bridge pulses on pair {key}")
            seen[key].append((lo, hi))

    @property
    def n_resonators(self) -> int:
        return len(self.resonators)

    @property
    def n_bridges(self) -> int:
        return len(self.bridges)

    @property
    def dim(self) -> int:
        return 2 * len(self.resonators) + len(self.bridges)

    def capacitance_ratio(self, j: int, t) -> float:
        """Summed capacitance-pulse ratio c(t) on resonator j."""
        c = 0.0
        for p in self.resonators[j].pulses:
            c = c + pulse_value(p, t)
        return c

    def bridge_gamma(self, b: int, t) -> float:
        return pulse_value(self.bridges[b].pulse, t)


# =====================================================================
# State and trajectories
# =====================================================================


@dataclass(frozen=True, eq=False)
class AnalogState:
    inductor_currents: np.ndarray
    bridge_currents: np.ndarray
    voltages: np.ndarray
    time: float

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.inductor_currents, self.bridge_currents, self.voltages])

    @staticmethod
    def from_vector(x: np.ndarray, network: ResonatorNetwork, time: float) -> "AnalogState":
        n, m = network.n_resonators, network.n_bridges
        return AnalogState(
            inductor_currents=np.array(x[:n], dtype=float),
            bridge_currents=np.array(x[n:n + m], dtype=float),
            voltages=np.array(x[n + m:], dtype=float),
            time=float(time),
        )

    @staticmethod
    def zero(network: ResonatorNetwork, time: float = 0.0) -> "AnalogState":
        return AnalogState.from_vector(np.zeros(network.dim), network, time)


@dataclass(frozen=True)
class SimConfig:
    """Fixed-step integration window.  record_stride 0 keeps only the
    first and last states of the trajectory."""

    step_size: float = DEFAULT_STEP
    end_time: float = 0.0
    record_stride: int = 1

    def __post_init__(self) -> None:
        if not (self.step_size > 0):
            raise ValueError("step_size must be > 0")
        if self.end_time < 0:
            raise ValueError("end_time must be >= 0")


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Recorded states: times[i] with row data[i] in network layout."""

    network: ResonatorNetwork
    times: np.ndarray
    data: np.ndarray

    def state(self, i: int) -> AnalogState:
        return AnalogState.from_vector(self.data[i], self.network, self.times[i])

    @property
    def final(self) -> AnalogState:
        return self.state(len(self.times) - 1)


# =====================================================================
# Generator assembly and integration
# =====================================================================


def _constant_kirchhoff(network: ResonatorNetwork) -> np.ndarray:
    """Time-independent part K with A(t) = diag(d(t)) K."""
    n, m = network.n_resonators, network.n_bridges
    dim = 2 * n + m
    K = np.zeros((dim, dim))
    voff = n + m
    for j, r in enumerate(network.resonators):
        K[j, voff + j] = r.orientation / r.L
        K[voff + j, j] = -r.orientation
    for b, br in enumerate(network.bridges):
        K[n + b, voff + br.u] = -1.0
        K[n + b, voff + br.v] = 1.0
        K[voff + br.u, n + b] += 1.0
        K[voff + br.v, n + b] += -1.0
    return K


class _DiagonalScale:
    """Evaluates the time-dependent diagonal d(t): ones on resonator
    current rows, Gamma_b(t) on bridge rows, elastance on voltage rows."""

    def __init__(self, network: ResonatorNetwork):
        n, m = network.n_resonators, network.n_bridges
        self.n, self.m = n, m
        self.eta0 = np.array([1.0 / r.C for r in network.resonators])
        self.buf = np.ones(2 * n + m)
        self.buf[n + m:] = self.eta0
        b = [br.pulse for br in network.bridges]
        self.b_amp = np.array([p.amplitude * 0.5 for p in b])
        self.b_t1 = np.array([p.t1 for p in b])
        self.b_t2 = np.array([p.t2 for p in b])
        self.b_T = np.array([p.T for p in b])
        owners, pulses = [], []
        for j, r in enumerate(network.resonators):
            for p in r.pulses:
                owners.append(j)
                pulses.append(p)
        self.c_owner = np.array(owners, dtype=int)
        self.c_amp = np.array([p.amplitude * 0.5 for p in pulses])
        self.c_t1 = np.array([p.t1 for p in pulses])
        self.c_t2 = np.array([p.t2 for p in pulses])
        self.c_T = np.array([p.T for p in pulses])
        self.cbuf = np.zeros(n)

    def __call__(self, t: float) -> np.ndarray:
        n, m = self.n, self.m
        if m:
            self.buf[n:n + m] = self.b_amp * (
                np.tanh((t - self.b_t1) / self.b_T) - np.tanh((t - self.b_t2) / self.b_T)
            )
        if self.c_owner.size:
            vals = self.c_amp * (
                np.tanh((t - self.c_t1) / self.c_T) - np.tanh((t - self.c_t2) / self.c_T)
            )
            self.cbuf[:] = 0.0
            np.add.at(self.cbuf, self.c_owner, vals)
            self.buf[n + m:] = self.eta0 * (1.0 - 0.5 * self.cbuf) ** 2
        return self.buf


def assemble_generator(network: ResonatorNetwork, t: float) -> np.ndarray:
    """Dense A(t) with dx/dt = A(t) x in the layout
    [resonator currents | bridge currents | voltages]."""
    K = _constant_kirchhoff(network)
    d = _DiagonalScale(network)(t)
    return d[:, None] * K


def integrate(network: ResonatorNetwork, initial: AnalogState, config: SimConfig) -> Trajectory:
    """Classical fixed-step 4th-order Runge-Kutta from initial.time over
    config.end_time, deterministic for identical inputs.

    Raises IntegrationError if any state entry becomes non-finite.
    """
    x = initial.as_vector().astype(float)
    if x.size != network.dim:
        raise ValueError("initial state does not match network")
    t0 = initial.time
    span = config.end_time
    if span == 0.0:
        data = x[None, :].copy()
        return Trajectory(network, np.array([t0]), data)
    n_steps = max(1, int(np.ceil(span / config.step_size - 1e-9)))
    h = span / n_steps

    K = _constant_kirchhoff(network)
    dscale = _DiagonalScale(network)
    dim = x.size
    k1 = np.empty(dim)
    k2 = np.empty(dim)
    k3 = np.empty(dim)
    k4 = np.empty(dim)
    xt = np.empty(dim)

    stride = config.record_stride
    if stride and stride > 0:
        n_rec = n_steps // stride + 1 + (1 if n_steps % stride else 0)
        times = np.empty(n_rec)
        data = np.empty((n_rec, dim))
    else:
        times = np.empty(2)
        data = np.empty((2, dim))
    times[0] = t0
    data[0] = x
    rec = 1

    t = t0
    for step in range(n_steps):
        d = dscale(t)
        np.dot(K, x, out=k1)
        k1 *= d
        np.multiply(k1, 0.5 * h, out=xt)
        xt += x
        d = dscale(t + 0.5 * h)
        np.dot(K, xt, out=k2)
        k2 *= d
        np.multiply(k2, 0.5 * h, out=xt)
        xt += x
        np.dot(K, xt, out=k3)
        k3 *= d
        np.multiply(k3, h, out=xt)
        xt += x
        d = dscale(t + h)
        np.dot(K, xt, out=k4)
        k4 *= d
        k2 += k3
        k2 *= 2.0
        k1 += k2
        k1 += k4
        k1 *= h / 6.0
        x += k1
        t = t0 + (step + 1) * h
        if stride and stride > 0 and (step + 1) % stride == 0:
            times[rec] = t
            data[rec] = x
            rec += 1
        if (step + 1) % 1024 == 0 and not np.all(np.isfinite(x)):
            raise IntegrationError(f"non-finite state at t={t}")
    if not np.all(np.isfinite(x)):
        raise IntegrationError(f"non-finite state at t={t}")
    if stride and stride > 0:
        if times[rec - 1] != t:
            times[rec] = t
            data[rec] = x
            rec += 1
        return Trajectory(network, times[:rec].copy(), data[:rec].copy())
    times[1] = t
    data[1] = x
    return Trajectory(network, times, data)


# =====================================================================
# Energy, phases, wavefunction
# =====================================================================


def total_energy(state: AnalogState, network: ResonatorNetwork, t: float | None = None) -> float:
    """Electrostatic + magnetic energy at time t (defaults to state.time).

    Bridge terms are I_b^2 / (2 Gamma_b); a bridge whose Gamma is off
    contributes zero if its current is negligible, otherwise the current
    is stranded in a disconnected inductor and an error is raised.
    """
    if t is None:
        t = state.time
    e = 0.0
    for j, r in enumerate(network.resonators):
        c = network.capacitance_ratio(j, t)
        c_eff = r.C / (1.0 - 0.5 * c) ** 2
        e += 0.5 * c_eff * state.voltages[j] ** 2
        e += 0.5 * r.L * state.inductor_currents[j] ** 2
    for b in range(network.n_bridges):
        gamma = network.bridge_gamma(b, t)
        ib = state.bridge_currents[b]
        if gamma < BRIDGE_GAMMA_FLOOR:
            if abs(ib) > STRANDED_CURRENT_TOL:
                raise StrandedBridgeCurrentError(
                    f"stranded bridge current {ib:.3e} on bridge {b} with Gamma ~ 0"
                )
            continue
        e += 0.5 * ib ** 2 / gamma
    return e


def wrap_angle(x: float) -> float:
    """Reduce an angle into (-pi, pi]."""
    y = np.mod(x, 2.0 * np.pi)
    if y > np.pi:
        y -= 2.0 * np.pi
    return float(y)


def extract_phase_amplitude(
    state: AnalogState,
    network: ResonatorNetwork,
    resonator: int,
    allow_perturbed: bool = False,
) -> tuple[float, float]:
    """Amplitude and phase of one resonator.

    With the reduced current scripted-I = sigma sqrt(L/C) I the voltage is
    V(t) = amplitude * cos(omega0 t + theta) and

        theta = arg(V + i scripted-I) - omega0 t    reduced into (-pi, pi].

    The resonator's capacitance pulse must be off at the sample time
    unless allow_perturbed is set.
    """
    r = network.resonators[resonator]
    t = state.time
    if not allow_perturbed and abs(network.capacitance_ratio(resonator, t)) > 1e-4:
        raise ValueError(f"resonator {resonator} capacitance perturbed at t={t}")
    red_i = r.orientation * np.sqrt(r.L / r.C) * state.inductor_currents[resonator]
    v = state.voltages[resonator]
    amplitude = float(np.hypot(v, red_i))
    if amplitude < DEGENERATE_AMPLITUDE_TOL:
        raise DegenerateAmplitudeError(
            f"degenerate amplitude {amplitude:.3e} on resonator {resonator}"
        )
    theta = wrap_angle(float(np.arctan2(red_i, v)) - r.omega0 * t)
    return amplitude, theta


def to_wavefunction(
    state: AnalogState,
    network: ResonatorNetwork,
    indices: list[int] | None = None,
) -> np.ndarray:
    """Normalized complex amplitudes alpha_j = V_j^0 e^{i theta_j} / norm
    over the chosen resonators (all by default, one per basis state)."""
    if indices is None:
        indices = list(range(network.n_resonators))
    w0 = network.resonators[indices[0]].omega0
    for j in indices[1:]:
        if abs(network.resonators[j].omega0 - w0) > 1e-9 * w0:
            raise ValueError("wavefunction mapping needs equal resonant frequencies")
    amps = np.zeros(len(indices))
    phases = np.zeros(len(indices))
    for k, j in enumerate(indices):
        try:
            amps[k], phases[k] = extract_phase_amplitude(state, network, j)
        except DegenerateAmplitudeError:
            amps[k], phases[k] = 0.0, 0.0
    norm = np.sqrt(np.sum(amps ** 2))
    if norm < DEGENERATE_AMPLITUDE_TOL:
        raise DegenerateAmplitudeError("zero total amplitude, no wavefunction")
    return (amps / norm) * np.exp(1j * phases)


# =====================================================================
# Serialization
# =====================================================================


def _pulse_dict(p: PulseProfile) -> dict:
    return {"amplitude": p.amplitude, "t1": p.t1, "t2": p.t2, "T": p.T}


def _pulse_from(d: dict) -> PulseProfile:
    return PulseProfile(d["amplitude"], d["t1"], d["t2"], d["T"])


def network_to_json_dict(network: ResonatorNetwork) -> dict:
    return {
        "resonators": [
            {
                "L": r.L,
                "C": r.C,
                "orientation": r.orientation,
                "pulses": [_pulse_dict(p) for p in r.pulses],
            }
            for r in network.resonators
        ],
        "bridges": [
            {"u": b.u, "v": b.v, "pulse": _pulse_dict(b.pulse)} for b in network.bridges
        ],
    }


def network_from_json_dict(d: dict) -> ResonatorNetwork:
    resonators = tuple(
        Resonator(
            L=r.get("L", 1.0),
            C=r.get("C", 1.0),
            orientation=r.get("orientation", 1),
            pulses=tuple(_pulse_from(p) for p in r.get("pulses", [])),
        )
        for r in d["resonators"]
    )
    bridges = tuple(
        Bridge(b["u"], b["v"], _pulse_from(b["pulse"])) for b in d.get("bridges", [])
    )
    return ResonatorNetwork(resonators, bridges)


def trajectory_csv_rows(traj: Trajectory):
    """Yield CSV rows: header then one row per recorded state."""
    n, m = traj.network.n_resonators, traj.network.n_bridges
    header = ["t"]
    header += [f"I{j}" for j in range(n)]
    header += [f"Ib{b}" for b in range(m)]
    header += [f"V{j}" for j in range(n)]
    yield header
    for i in range(len(traj.times)):
        yield [traj.times[i]] + list(traj.data[i])
