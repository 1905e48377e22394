"""Exact N-qubit register arithmetic used as the reference for the
analog circuit simulations.

A register of N qubits stores 2^N complex amplitudes indexed so that
qubit 1 is the most significant bit: flipping qubit s toggles bit
2^(N-s) of the index.  Gates act as dense or implicitly-applied
unitaries on the amplitude vector.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

__all__ = [
    "QubitRegister",
    "GateOp",
    "Hadamard",
    "PhaseShift",
    "MultiControlledPhase",
    "PauliX",
    "CNOT",
    "OneQubitUniversal",
    "apply_gate",
    "apply_circuit",
    "gate_matrix",
    "walsh_hadamard",
    "one_qubit_universal_matrix",
    "inner_product",
    "register_csv_rows",
    "gates_to_text",
    "gates_from_text",
    "format_angle",
]

SQRT2 = np.sqrt(2.0)


# =====================================================================
# Register
# =====================================================================


@dataclass(frozen=True, eq=False)
class QubitRegister:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        if self.n_qubits < 1:
            raise ValueError("need at least one qubit")
        if self.amplitudes.shape != (2 ** self.n_qubits,):
            raise ValueError("amplitude vector has wrong length")

    @staticmethod
    def computational(n_qubits: int, index: int = 0) -> "QubitRegister":
        amps = np.zeros(2 ** n_qubits, dtype=complex)
        amps[index] = 1.0
        return QubitRegister(n_qubits, amps)

    @staticmethod
    def from_amplitudes(amps) -> "QubitRegister":
        a = np.asarray(amps, dtype=complex)
        n = int(round(np.log2(a.size)))
        if 2 ** n != a.size:
            raise ValueError("amplitude count must be a power of two")
        return QubitRegister(n, a.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def bit_of(self, index: int, qubit: int) -> int:
        """Value of qubit (1-based, MSB first) in basis state index."""
        return (index >> (self.n_qubits - qubit)) & 1


def _check_qubit(n: int, s: int) -> None:
    if not (1 <= s <= n):
        raise ValueError(f"qubit {s} out of range 1..{n}")


# =====================================================================
# Gate operations
# =====================================================================


class GateOp:
    """Marker base class; concrete gates are frozen dataclasses."""


@dataclass(frozen=True)
class Hadamard(GateOp):
    qubit: int


@dataclass(frozen=True)
class PhaseShift(GateOp):
    """diag(1, e^{i phi}) on one qubit."""

    qubit: int
    phi: float


@dataclass(frozen=True)
class MultiControlledPhase(GateOp):
    """Phase e^{i phi} on basis states where every listed qubit is 1."""

    qubits: tuple[int, ...]
    phi: float

    def __post_init__(self) -> None:
        if len(self.qubits) == 0:
            raise ValueError("needs at least one qubit")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError("repeated qubit")


@dataclass(frozen=True)
class PauliX(GateOp):
    qubit: int


@dataclass(frozen=True)
class CNOT(GateOp):
    control: int
    target: int

    def __post_init__(self) -> None:
        if self.control == self.target:
            raise ValueError("control and target must differ")


@dataclass(frozen=True)
class OneQubitUniversal(GateOp):
    """Two-angle single-qubit family covering any state preparation:

        [[cos(theta/2),            -i sin(theta/2)        ],
         [i e^{i phi} sin(theta/2), -e^{i phi} cos(theta/2)]]
    """

    qubit: int
    theta: float
    phi: float


# =====================================================================
# Application
# =====================================================================


def _single_qubit_pairs(n: int, s: int):
    """Index pairs (i0, i1) with qubit s equal to 0 resp. 1, other bits
    matching."""
    bit = 1 << (n - s)
    idx = np.arange(2 ** n)
    lower = idx[(idx & bit) == 0]
    return lower, lower | bit


def apply_gate(reg: QubitRegister, gate: GateOp) -> QubitRegister:
    n = reg.n_qubits
    amps = reg.amplitudes.copy()
    if isinstance(gate, Hadamard):
        _check_qubit(n, gate.qubit)
        i0, i1 = _single_qubit_pairs(n, gate.qubit)
        a0, a1 = amps[i0].copy(), amps[i1].copy()
        amps[i0] = (a0 + a1) / SQRT2
        amps[i1] = (a0 - a1) / SQRT2
    elif isinstance(gate, PhaseShift):
        _check_qubit(n, gate.qubit)
        _, i1 = _single_qubit_pairs(n, gate.qubit)
        amps[i1] *= cmath.exp(1j * gate.phi)
    elif isinstance(gate, MultiControlledPhase):
        for s in gate.qubits:
            _check_qubit(n, s)
        mask = 0
        for s in gate.qubits:
            mask |= 1 << (n - s)
        idx = np.arange(2 ** n)
        sel = (idx & mask) == mask
        amps[sel] *= cmath.exp(1j * gate.phi)
    elif isinstance(gate, PauliX):
        _check_qubit(n, gate.qubit)
        i0, i1 = _single_qubit_pairs(n, gate.qubit)
        amps[i0], amps[i1] = amps[i1].copy(), amps[i0].copy()
    elif isinstance(gate, CNOT):
        _check_qubit(n, gate.control)
        _check_qubit(n, gate.target)
        cbit = 1 << (n - gate.control)
        tbit = 1 << (n - gate.target)
        idx = np.arange(2 ** n)
        src = idx[((idx & cbit) != 0) & ((idx & tbit) == 0)]
        amps[src], amps[src | tbit] = amps[src | tbit].copy(), amps[src].copy()
    elif isinstance(gate, OneQubitUniversal):
        _check_qubit(n, gate.qubit)
        u = one_qubit_universal_matrix(gate.theta, gate.phi)
        i0, i1 = _single_qubit_pairs(n, gate.qubit)
        a0, a1 = amps[i0].copy(), amps[i1].copy()
        amps[i0] = u[0, 0] * a0 + u[0, 1] * a1
        amps[i1] = u[1, 0] * a0 + u[1, 1] * a1
    else:
        raise TypeError(f"unknown gate {gate!r}")
    return QubitRegister(n, amps)


def apply_circuit(reg: QubitRegister, gates) -> QubitRegister:
    for g in gates:
        reg = apply_gate(reg, g)
    return reg


def gate_matrix(gate: GateOp, n_qubits: int) -> np.ndarray:
    """Dense 2^N x 2^N matrix of the gate, mostly for tests."""
    dim = 2 ** n_qubits
    u = np.zeros((dim, dim), dtype=complex)
    for k in range(dim):
        reg = QubitRegister.computational(n_qubits, k)
        u[:, k] = apply_gate(reg, gate).amplitudes
    return u


def walsh_hadamard(reg: QubitRegister) -> QubitRegister:
    """Hadamard on every qubit (order irrelevant)."""
    for s in range(1, reg.n_qubits + 1):
        reg = apply_gate(reg, Hadamard(s))
    return reg


def one_qubit_universal_matrix(theta: float, phi: float) -> np.ndarray:
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    eip = cmath.exp(1j * phi)
    return np.array([[c, -1j * s], [1j * eip * s, -eip * c]])


def inner_product(a: QubitRegister, b: QubitRegister) -> complex:
    """<a|b> with conjugation on the first argument."""
    if a.n_qubits != b.n_qubits:
        raise ValueError("register sizes differ")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


# =====================================================================
# Text formats
# =====================================================================


def format_angle(phi: float) -> str:
    """Angle as a multiple of pi when the ratio is simple, else decimal."""
    ratio = phi / np.pi
    for den in range(1, 13):
        num = ratio * den
        if abs(num - round(num)) < 1e-12 and abs(num) < 1e6:
            num = int(round(num))
            if num == 0:
                return "0"
            sign = "-" if num < 0 else ""
            num = abs(num)
            if den == 1:
                return f"{sign}pi" if num == 1 else f"{sign}{num}pi"
            return f"{sign}pi/{den}" if num == 1 else f"{sign}{num}pi/{den}"
    return repr(float(phi))


def parse_angle(text: str) -> float:
    """Inverse of format_angle; accepts decimals and [k]pi[/m] forms."""
    s = text.strip().replace(" ", "")
    sign = 1.0
    if s.startswith("-"):
        sign, s = -1.0, s[1:]
    elif s.startswith("+"):
        s = s[1:]
    if "pi" in s:
        head, _, tail = s.partition("pi")
        num = float(head) if head else 1.0
        den = 1.0
        if tail:
            if not tail.startswith("/"):
                raise ValueError(f"bad angle {text!r}")
            den = float(tail[1:])
        return sign * num * np.pi / den
    return sign * float(s)


def gates_to_text(gates) -> str:
    """One gate per line.  Phase-type gates print as Z / CZ / MCZ with the
    angle, others by their short names."""
    lines = []
    for g in gates:
        if isinstance(g, Hadamard):
            lines.append(f"H {g.qubit}")
        elif isinstance(g, PauliX):
            lines.append(f"X {g.qubit}")
        elif isinstance(g, CNOT):
            lines.append(f"CNOT {g.control} {g.target}")
        elif isinstance(g, PhaseShift):
            lines.append(f"Z {g.qubit} {format_angle(g.phi)}")
        elif isinstance(g, OneQubitUniversal):
            lines.append(f"U {g.qubit} {format_angle(g.theta)} {format_angle(g.phi)}")
        elif isinstance(g, MultiControlledPhase):
            qs = sorted(g.qubits)
            if len(qs) == 1:
                lines.append(f"Z {qs[0]} {format_angle(g.phi)}")
            elif len(qs) == 2:
                lines.append(f"CZ {qs[0]} {qs[1]} {format_angle(g.phi)}")
            else:
                inner = ",".join(str(q) for q in qs)
                lines.append(f"MCZ {{{inner}}} {format_angle(g.phi)}")
        else:
            raise TypeError(f"unknown gate {g!r}")
    return "\n".join(lines) + ("\n" if lines else "")


def gates_from_text(text: str):
    gates: list[GateOp] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        kind = parts[0].upper()
        if kind == "H":
            gates.append(Hadamard(int(parts[1])))
        elif kind == "X":
            gates.append(PauliX(int(parts[1])))
        elif kind == "CNOT":
            gates.append(CNOT(int(parts[1]), int(parts[2])))
        elif kind == "Z":
            gates.append(PhaseShift(int(parts[1]), parse_angle(parts[2])))
        elif kind == "U":
            gates.append(OneQubitUniversal(int(parts[1]), parse_angle(parts[2]), parse_angle(parts[3])))
        elif kind == "CZ":
            gates.append(MultiControlledPhase((int(parts[1]), int(parts[2])), parse_angle(parts[3])))
        elif kind == "MCZ":
            body = line.split("{", 1)[1].split("}", 1)
            qs = tuple(int(q) for q in body[0].split(","))
            gates.append(MultiControlledPhase(qs, parse_angle(body[1].strip())))
        else:
            raise ValueError(f"unknown gate line {line!r}")
    return gates


def register_csv_rows(reg: QubitRegister):
    """Yield rows: index, bit string, real and imaginary amplitude."""
    yield ["index", "bits", "re", "im"]
    for k, a in enumerate(reg.amplitudes):
        bits = format(k, f"0{reg.n_qubits}b")
        yield [k, bits, a.real, a.imag]
