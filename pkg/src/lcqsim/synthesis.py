"""Synthesis of equal-weight superposition states from phase gates.

Target states have uniform amplitude 1/sqrt(2^N) on every basis index
with either a sign x_j = +-1 (real equal weight) or a general phase
e^{i theta_j} (complex equal weight).  Both are reached from the uniform
superposition H^N |0> by a set of multi-controlled phase gates, one per
basis-index support set, found here by lattice arithmetic:

* signs: process indices by ascending Hamming weight; a residual -1 at
  index j is cleared by a pi gate on the support of j, which also flips
  every superset of j.

* phases: the gate angle on support S is the alternating subset sum
  phi_S = sum_{T subset S} (-1)^{|S|-|T|} theta_{index(T)}, the Moebius
  transform of the phase table over the subset lattice.

Qubit s corresponds to index bit 2^(N-s), so qubit 1 is the most
significant bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .ideal import MultiControlledPhase, format_angle, parse_angle

__all__ = [
    "SignPattern",
    "PhasePattern",
    "HypergraphState",
    "StateCounts",
    "support_of_index",
    "index_of_support",
    "synthesize_rew",
    "synthesize_cew",
    "to_hypergraph",
    "from_hypergraph",
    "hypergraph_to_text",
    "hypergraph_from_text",
    "state_counts",
    "sign_pattern_to_text",
    "sign_pattern_from_text",
    "phase_pattern_to_text",
    "phase_pattern_from_text",
]


def support_of_index(index: int, n_qubits: int) -> tuple[int, ...]:
    """Qubits set to 1 in basis index (qubit 1 = most significant bit)."""
    return tuple(s for s in range(1, n_qubits + 1) if index >> (n_qubits - s) & 1)


def index_of_support(qubits, n_qubits: int) -> int:
    idx = 0
    for s in qubits:
        idx |= 1 << (n_qubits - s)
    return idx


# =====================================================================
# Patterns
# =====================================================================


@dataclass(frozen=True)
class SignPattern:
    """x_j = +-1 per basis index, length 2^N."""

    n_qubits: int
    signs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.signs) != 2 ** self.n_qubits:
            raise ValueError("sign count must be 2^N")
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError("signs must be +-1")

    @staticmethod
    def from_signs(signs) -> "SignPattern":
        signs = tuple(int(s) for s in signs)
        n = int(round(np.log2(len(signs))))
        if 2 ** n != len(signs):
            raise ValueError("sign count must be a power of two")
        return SignPattern(n, signs)

    def amplitudes(self) -> np.ndarray:
        return np.array(self.signs, dtype=complex) / np.sqrt(len(self.signs))


@dataclass(frozen=True)
class PhasePattern:
    """theta_j per basis index with the global phase fixed by theta_0 = 0."""

    n_qubits: int
    phases: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.phases) != 2 ** self.n_qubits:
            raise ValueError("phase count must be 2^N")
        if abs(self.phases[0]) > 1e-12:
            raise ValueError("theta_0 must be 0; use from_phases to renormalize")

    @staticmethod
    def from_phases(phases) -> "PhasePattern":
        ph = [float(p) for p in phases]
        n = int(round(np.log2(len(ph))))
        if 2 ** n != len(ph):
            raise ValueError("phase count must be a power of two")
        base = ph[0]
        ph = [p - base for p in ph]
        ph[0] = 0.0
        return PhasePattern(n, tuple(ph))

    def amplitudes(self) -> np.ndarray:
        return np.exp(1j * np.array(self.phases)) / np.sqrt(len(self.phases))


# =====================================================================
# Synthesis
# =====================================================================


def _indices_by_weight(n_qubits: int):
    dim = 2 ** n_qubits
    order = sorted(range(1, dim), key=lambda j: (bin(j).count("1"), j))
    return order


def synthesize_rew(pattern: SignPattern):
    """Gates reproducing a sign pattern from the uniform superposition.

    Returns (global_sign, gates); the product of the gates applied to
    H^N |0> equals global_sign * pattern.  Gates are ordered by Hamming
    weight of the support, then basis index; same-weight decisions are
    independent so this order is canonical.
    """
    n = pattern.n_qubits
    signs = list(pattern.signs)
    global_sign = 1
    if signs[0] < 0:
        global_sign = -1
        signs = [-s for s in signs]
    gates: list[MultiControlledPhase] = []
    for j in _indices_by_weight(n):
        if signs[j] < 0:
            gates.append(MultiControlledPhase(support_of_index(j, n), np.pi))
            for k in range(j, 2 ** n):
                if k & j == j:
                    signs[k] = -signs[k]
    return global_sign, gates


def _wrap(phi: float) -> float:
    y = np.mod(phi, 2.0 * np.pi)
    if y > np.pi:
        y -= 2.0 * np.pi
    return float(y)


def synthesize_cew(pattern: PhasePattern):
    """Gates reproducing a phase pattern from the uniform superposition,
    one per support with a nonzero alternating subset sum."""
    n = pattern.n_qubits
    gates: list[MultiControlledPhase] = []
    for j in _indices_by_weight(n):
        phi = 0.0
        # iterate submasks of j, including 0 and j
        t = j
        while True:
            sign = 1 if (bin(j).count("1") - bin(t).count("1")) % 2 == 0 else -1
            phi += sign * pattern.phases[t]
            if t == 0:
                break
            t = (t - 1) & j
        phi = _wrap(phi)
        if abs(phi) > 1e-12:
            gates.append(MultiControlledPhase(support_of_index(j, n), phi))
    return gates


# =====================================================================
# Hypergraph form
# =====================================================================


@dataclass(frozen=True)
class HypergraphState:
    """Vertices are qubits 1..N; a weighted hyperedge on qubit set S
    stands for a phase gate of its weight on S."""

    n_qubits: int
    edges: tuple[tuple[tuple[int, ...], float], ...]

    def __post_init__(self) -> None:
        seen = set()
        for qs, _ in self.edges:
            if qs != tuple(sorted(qs)) or len(set(qs)) != len(qs):
                raise ValueError(f"edge {qs} must be sorted and distinct")
            if qs in seen:
                raise ValueError(f"duplicate edge {qs}")
            seen.add(qs)
            for s in qs:
                if not (1 <= s <= self.n_qubits):
                    raise ValueError(f"vertex {s} out of range")


def to_hypergraph(n_qubits: int, gates) -> HypergraphState:
    edges = []
    for g in gates:
        if not isinstance(g, MultiControlledPhase):
            raise TypeError("hypergraph form only covers phase gates")
        edges.append((tuple(sorted(g.qubits)), float(g.phi)))
    return HypergraphState(n_qubits, tuple(edges))


def from_hypergraph(hg: HypergraphState):
    return [MultiControlledPhase(qs, w) for qs, w in hg.edges]


def hypergraph_to_text(hg: HypergraphState) -> str:
    """Edge-list text: loops for single qubits, edges for pairs, hyper
    lines for larger sets, each with a weight annotation."""
    lines = [f"qubits {hg.n_qubits}"]
    for qs, w in hg.edges:
        wtxt = f"[w={format_angle(w)}]"
        if len(qs) == 1:
            lines.append(f"loop {qs[0]} {wtxt}")
        elif len(qs) == 2:
            lines.append(f"edge {qs[0]} {qs[1]} {wtxt}")
        else:
            inner = ",".join(str(s) for s in qs)
            lines.append(f"hyper {{{inner}}} {wtxt}")
    return "\n".join(lines) + "\n"


def hypergraph_from_text(text: str) -> HypergraphState:
    n = None
    edges = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("qubits"):
            n = int(line.split()[1])
            continue
        head, _, wpart = line.partition("[w=")
        weight = parse_angle(wpart.rstrip("]").strip())
        parts = head.split()
        if parts[0] == "loop":
            qs: tuple[int, ...] = (int(parts[1]),)
        elif parts[0] == "edge":
            qs = (int(parts[1]), int(parts[2]))
        elif parts[0] == "hyper":
            body = head.split("{", 1)[1].split("}", 1)[0]
            qs = tuple(int(s) for s in body.split(","))
        else:
            raise ValueError(f"unknown hypergraph line {line!r}")
        edges.append((tuple(sorted(qs)), weight))
    if n is None:
        n = max((max(qs) for qs, _ in edges), default=1)
    return HypergraphState(n, tuple(edges))


# =====================================================================
# Counting
# =====================================================================


class StateCounts(NamedTuple):
    graph_states: int
    sign_patterns: int
    distinct_up_to_sign: int


def state_counts(n_qubits: int) -> StateCounts:
    """Exact counts: graph states (pi weights on loops and pair edges
    only), sign patterns, and sign patterns up to a global sign.  The
    graph-state family is strictly smaller from three qubits on."""
    if n_qubits < 1:
        raise ValueError("need at least one qubit")
    graph = 2 ** (n_qubits + n_qubits * (n_qubits - 1) // 2)
    rew = 2 ** (2 ** n_qubits)
    return StateCounts(graph, rew, rew // 2)


# =====================================================================
# Pattern text
# =====================================================================


def sign_pattern_to_text(pattern: SignPattern) -> str:
    return "".join("+" if s > 0 else "-" for s in pattern.signs) + "\n"


def sign_pattern_from_text(text: str) -> SignPattern:
    chars = "".join(text.split())
    if not chars or any(c not in "+-" for c in chars):
        raise ValueError("sign pattern text must be + and - characters")
    return SignPattern.from_signs(1 if c == "+" else -1 for c in chars)


def phase_pattern_to_text(pattern: PhasePattern) -> str:
    return " ".join(format_angle(p) for p in pattern.phases) + "\n"


def phase_pattern_from_text(text: str) -> PhasePattern:
    tokens = text.split()
    if not tokens:
        raise ValueError("empty phase pattern text")
    return PhasePattern.from_phases(parse_angle(t) for t in tokens)
