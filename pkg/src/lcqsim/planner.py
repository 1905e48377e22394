"""Compilation of equal-weight inner products onto resonator networks.

The register-normalized inner product of two equal-weight states is the
index-0 amplitude after a phase-between-transforms circuit,

    y = W . diag(e^{-i theta^w}) . diag(e^{i theta^x}) . W |0...0>,
    y_0 = <psi_w|psi_x>,

with W the full Hadamard transform.  A plan spells this out for a bank
of 2^N resonators: each Hadamard layer becomes 2^{N-1} simultaneous
bridge pulses on index pairs differing in one bit, and each diagonal
phase becomes a capacitance pulse on one resonator.

Light-cone pruning removes bridges that cannot influence the result:
walking forward from index 0 the first transform needs only 2^{s-1}
bridges in layer s, and walking backward from index 0 the final
transform needs 2^{N-s}, totalling 2^N - 1 each instead of N 2^{N-1}.

The analog lowering realizes each bridge pair as an exact pair-Hadamard
by sandwiching the even-split bridge pulse between per-member phase
delays (9 pi/8 on the lower index, 5 pi/8 on the upper, both sides);
the bridge plateau is calibrated by quadrature so the accumulated
rotation angle is exactly pi/4, and the sandwich algebra then cancels
all extraneous phases including the global one.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .gates import (
    RATIO,
    T1_DEFAULT,
    T_EDGE,
    calibrate_mixing_duration,
    delay_pulse,
    state_from_amplitudes,
)
from .ideal import format_angle, parse_angle
from .network import (
    Bridge,
    DegenerateAmplitudeError,
    Resonator,
    ResonatorNetwork,
    SimConfig,
    extract_phase_amplitude,
    integrate,
    wrap_angle,
)
from .pulses import PulseProfile
from .synthesis import PhasePattern, SignPattern

__all__ = [
    "HadamardBridge",
    "PhaseShiftStep",
    "PlanStats",
    "ResonatorPlan",
    "hadamard_bridges",
    "plan_inner_product",
    "prune",
    "execute",
    "plan_to_text",
    "plan_from_text",
]

COMP_LOWER = 9.0 * np.pi / 8.0
COMP_UPPER = 5.0 * np.pi / 8.0
PLAN_GAP = 6.0 * T_EDGE


@dataclass(frozen=True)
class HadamardBridge:
    """One Hadamard layer: disjoint pairs differing in bit N - s."""

    qubit: int
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for j, k in self.pairs:
            if j >= k:
                raise ValueError(f"pair ({j},{k}) must be ordered")
            if j in seen or k in seen:
                raise ValueError("pairs within a layer must be disjoint")
            seen.update((j, k))


@dataclass(frozen=True)
class PhaseShiftStep:
    resonator: int
    phi: float


class PlanStats(NamedTuple):
    bridge_count_full: int
    bridge_count_pruned: int
    phase_shift_count: int


@dataclass(frozen=True)
class ResonatorPlan:
    n_qubits: int
    steps: tuple
    full_bridge_count: int

    def __post_init__(self) -> None:
        bit_top = 2 ** self.n_qubits
        for st in self.steps:
            if isinstance(st, HadamardBridge):
                bit = 1 << (self.n_qubits - st.qubit)
                for j, k in st.pairs:
                    if k != (j | bit) or (j & bit):
                        raise ValueError(f"pair ({j},{k}) does not differ in qubit {st.qubit}")
                    if k >= bit_top:
                        raise ValueError(f"pair ({j},{k}) out of range")
            elif isinstance(st, PhaseShiftStep):
                if not (0 <= st.resonator < bit_top):
                    raise ValueError("phase-shift resonator out of range")
            else:
                raise TypeError(f"unknown plan step {st!r}")

    @property
    def bridge_count(self) -> int:
        return sum(len(st.pairs) for st in self.steps if isinstance(st, HadamardBridge))

    @property
    def stats(self) -> PlanStats:
        n_ps = sum(1 for st in self.steps if isinstance(st, PhaseShiftStep))
        return PlanStats(self.full_bridge_count, self.bridge_count, n_ps)


def hadamard_bridges(n_qubits: int, qubit: int) -> list[tuple[int, int]]:
    """All 2^{N-1} index pairs differing exactly in the given qubit's bit."""
    if not (1 <= qubit <= n_qubits):
        raise ValueError(f"qubit {qubit} out of range 1..{n_qubits}")
    bit = 1 << (n_qubits - qubit)
    return [(j, j | bit) for j in range(2 ** n_qubits) if not j & bit]


def _phase_vector(p) -> np.ndarray:
    if isinstance(p, SignPattern):
        return np.where(np.array(p.signs) < 0, np.pi, 0.0)
    if isinstance(p, PhasePattern):
        return np.array(p.phases, dtype=float)
    raise TypeError("plan inputs must be SignPattern or PhasePattern")


def plan_inner_product(x, w) -> ResonatorPlan:
    """Full (unpruned) plan whose execution leaves <psi_w|psi_x> on
    resonator 0: Hadamard layers, x phases, conjugated w phases,
    Hadamard layers again."""
    tx, tw = _phase_vector(x), _phase_vector(w)
    if tx.size != tw.size:
        raise ValueError("input and weight sizes differ")
    n = int(round(np.log2(tx.size)))
    steps: list = [
        HadamardBridge(s, tuple(hadamard_bridges(n, s))) for s in range(1, n + 1)
    ]
    steps += [PhaseShiftStep(j, float(tx[j])) for j in range(tx.size) if tx[j] != 0.0]
    steps += [PhaseShiftStep(j, float(-tw[j])) for j in range(tw.size) if tw[j] != 0.0]
    steps += [HadamardBridge(s, tuple(hadamard_bridges(n, s))) for s in range(1, n + 1)]
    return ResonatorPlan(n, tuple(steps), 2 * n * 2 ** (n - 1))


def _split_transforms(plan: ResonatorPlan):
    """Step indices of the leading and trailing Hadamard transforms."""
    hb = [i for i, st in enumerate(plan.steps) if isinstance(st, HadamardBridge)]
    if len(hb) != 2 * plan.n_qubits:
        raise ValueError("plan does not have two full Hadamard transforms")
    return hb[: plan.n_qubits], hb[plan.n_qubits:]


def prune(plan: ResonatorPlan, variant: str = "output") -> ResonatorPlan:
    """Remove bridges outside the light cone between |0...0> and the
    index-0 output.

    variant "output" prunes both transforms (preserves y_0 exactly);
    variant "complete-final" keeps the final transform whole, which also
    preserves every other output y_j.
    """
    if variant not in ("output", "complete-final"):
        raise ValueError("variant must be output or complete-final")
    first, last = _split_transforms(plan)
    steps = list(plan.steps)

    live = {0}
    for i in first:
        st = steps[i]
        kept = []
        for j, k in st.pairs:
            if j in live or k in live:
                kept.append((j, k))
        for j, k in kept:
            live.update((j, k))
        steps[i] = HadamardBridge(st.qubit, tuple(kept))

    if variant == "output":
        blive = {0}
        kept_by_step: dict[int, list] = {}
        for i in reversed(last):
            st = steps[i]
            kept = []
            for j, k in st.pairs:
                if j in blive or k in blive:
                    kept.append((j, k))
            for j, k in kept:
                blive.update((j, k))
            kept_by_step[i] = kept
        for i in last:
            steps[i] = HadamardBridge(steps[i].qubit, tuple(kept_by_step[i]))

    return ResonatorPlan(plan.n_qubits, tuple(steps), plan.full_bridge_count)


# =====================================================================
# Execution
# =====================================================================


def _execute_ideal(plan: ResonatorPlan) -> np.ndarray:
    amps = np.zeros(2 ** plan.n_qubits, dtype=complex)
    amps[0] = 1.0
    inv = 1.0 / np.sqrt(2.0)
    for st in plan.steps:
        if isinstance(st, HadamardBridge):
            for j, k in st.pairs:
                a, b = amps[j], amps[k]
                amps[j], amps[k] = (a + b) * inv, (a - b) * inv
        else:
            amps[st.resonator] *= np.exp(1j * st.phi)
    return amps


@lru_cache(maxsize=8)
def _calibrated_mix_plateau(amplitude: float, T: float) -> float:
    return calibrate_mixing_duration(np.pi / 4.0, amplitude, T)


def _execute_analog(plan: ResonatorPlan, step_size: float | None, max_qubits: int) -> np.ndarray:
    from .network import DEFAULT_STEP

    if plan.n_qubits > max_qubits:
        raise ValueError(
            f"analog backend limited to {max_qubits} qubits (requested {plan.n_qubits})"
        )
    n_res = 2 ** plan.n_qubits
    ref = n_res
    pulses: dict[int, list[PulseProfile]] = {j: [] for j in range(n_res)}
    bridges: list[Bridge] = []
    plateau = _calibrated_mix_plateau(RATIO, T_EDGE)
    cursor = T1_DEFAULT

    def phase_window(delays: dict[int, float]) -> None:
        nonlocal cursor
        longest = 0.0
        for j, d in delays.items():
            if d <= 0.0:
                continue
            p = delay_pulse(d, cursor)
            pulses[j].append(p)
            longest = max(longest, p.t2 - p.t1)
        cursor += longest + PLAN_GAP

    for st in plan.steps:
        if isinstance(st, HadamardBridge):
            if not st.pairs:
                continue
            comp = {}
            for j, k in st.pairs:
                comp[j] = COMP_LOWER
                comp[k] = COMP_UPPER
            phase_window(comp)
            for j, k in st.pairs:
                bridges.append(Bridge(j, k, PulseProfile(RATIO, cursor, cursor + plateau, T_EDGE)))
            cursor += plateau + PLAN_GAP
            phase_window(comp)
        else:
            delay = float(np.mod(-st.phi, 2.0 * np.pi))
            phase_window({st.resonator: delay})

    readout = cursor + 12.0 * T_EDGE
    resonators = tuple(Resonator(pulses=tuple(pulses[j])) for j in range(n_res)) + (Resonator(),)
    network = ResonatorNetwork(resonators, tuple(bridges))

    init = state_from_amplitudes(network, {0: 1.0 + 0j, ref: 1.0 + 0j})
    h = DEFAULT_STEP if step_size is None else step_size
    traj = integrate(network, init, SimConfig(h, readout, 0))
    final = traj.final

    _, theta_ref = extract_phase_amplitude(final, network, ref)
    amp = np.zeros(n_res)
    phase = np.zeros(n_res)
    for j in range(n_res):
        try:
            a, th = extract_phase_amplitude(final, network, j)
        except DegenerateAmplitudeError:
            a, th = 0.0, 0.0
        amp[j] = a
        phase[j] = wrap_angle(th - theta_ref) if a > 0 else 0.0
    norm = np.sqrt(np.sum(amp ** 2))
    return (amp / norm) * np.exp(1j * phase)


def execute(
    plan: ResonatorPlan,
    backend: str = "ideal",
    step_size: float | None = None,
    max_qubits: int = 4,
) -> np.ndarray:
    """Outputs y_j: the resonator amplitudes after the plan, with
    y_0 = <psi_w|psi_x>.  Real for sign inputs (up to backend error)."""
    if backend == "ideal":
        return _execute_ideal(plan)
    if backend == "analog":
        return _execute_analog(plan, step_size, max_qubits)
    raise ValueError(f"unknown backend {backend!r}")


# =====================================================================
# Plan text
# =====================================================================


def plan_to_text(plan: ResonatorPlan) -> str:
    lines = [f"plan {plan.n_qubits} full {plan.full_bridge_count}"]
    for st in plan.steps:
        if isinstance(st, HadamardBridge):
            for j, k in st.pairs:
                lines.append(f"HB {st.qubit} {j} {k}")
        else:
            lines.append(f"PS {st.resonator} {format_angle(st.phi)}")
    return "\n".join(lines) + "\n"


def plan_from_text(text: str) -> ResonatorPlan:
    n = None
    full_declared = None
    steps: list = []
    cur_qubit = None
    cur_pairs: list[tuple[int, int]] = []

    def flush():
        nonlocal cur_qubit, cur_pairs
        if cur_pairs:
            steps.append(HadamardBridge(cur_qubit, tuple(cur_pairs)))
        cur_qubit, cur_pairs = None, []

    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "plan":
            n = int(parts[1])
            # optional `full <count>` records the pre-pruning bridge total
            if len(parts) >= 4 and parts[2] == "full":
                full_declared = int(parts[3])
        elif parts[0] == "HB":
            s, j, k = int(parts[1]), int(parts[2]), int(parts[3])
            if s != cur_qubit:
                flush()
                cur_qubit = s
            cur_pairs.append((j, k))
        elif parts[0] == "PS":
            flush()
            steps.append(PhaseShiftStep(int(parts[1]), parse_angle(parts[2])))
        else:
            raise ValueError(f"unknown plan line {line!r}")
    flush()
    if n is None:
        raise ValueError("plan text missing its `plan N` header")
    full = sum(len(st.pairs) for st in steps if isinstance(st, HadamardBridge))
    if full_declared is not None:
        full = full_declared
    return ResonatorPlan(n, tuple(steps), full)
