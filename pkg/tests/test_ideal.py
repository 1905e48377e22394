"""Reference register simulator: gate actions, conventions, text round-trips."""

import math

import numpy as np
import pytest

from lcqsim.ideal import (
    CNOT,
    Hadamard,
    MultiControlledPhase,
    OneQubitUniversal,
    PauliX,
    PhaseShift,
    QubitRegister,
    apply_circuit,
    apply_gate,
    format_angle,
    gate_matrix,
    gates_from_text,
    gates_to_text,
    inner_product,
    one_qubit_universal_matrix,
    parse_angle,
    register_csv_rows,
    walsh_hadamard,
)

H2 = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)


def kron_chain(mats):
    out = np.eye(1)
    for m in mats:
        out = np.kron(out, m)
    return out


def one_qubit_on(n, s, m):
    # qubit 1 is the most significant bit
    mats = [np.eye(2)] * n
    mats[s - 1] = m
    return kron_chain(mats)


# =====================================================================
# Single-qubit gates against dense Kronecker products
# =====================================================================


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_hadamard_matches_kron(n):
    for s in range(1, n + 1):
        got = gate_matrix(Hadamard(s), n)
        assert np.max(np.abs(got - one_qubit_on(n, s, H2))) < 1e-12


@pytest.mark.parametrize("n", [1, 2, 3])
def test_pauli_x_matches_kron(n):
    x = np.array([[0.0, 1.0], [1.0, 0.0]])
    for s in range(1, n + 1):
        got = gate_matrix(PauliX(s), n)
        assert np.max(np.abs(got - one_qubit_on(n, s, x))) < 1e-12


def test_phase_shift_matrix():
    phi = 0.9
    z = np.diag([1.0, np.exp(1j * phi)])
    got = gate_matrix(PhaseShift(2, phi), 2)
    assert np.max(np.abs(got - one_qubit_on(2, 2, z))) < 1e-12


def test_qubit_one_is_most_significant():
    # X on qubit 1 of /00> must produce /10> = index 2
    reg = QubitRegister.computational(2, 0)
    out = apply_gate(reg, PauliX(1))
    assert abs(out.amplitudes[2] - 1.0) < 1e-12


# =====================================================================
# Controlled and multi-controlled phases
# =====================================================================


def test_cnot_action():
    n = 2
    # control qubit 1, target qubit 2: /10> -> /11>
    reg = QubitRegister.computational(n, 2)
    out = apply_gate(reg, CNOT(1, 2))
    assert abs(out.amplitudes[3] - 1.0) < 1e-12
    # /01> untouched
    reg = QubitRegister.computational(n, 1)
    out = apply_gate(reg, CNOT(1, 2))
    assert abs(out.amplitudes[1] - 1.0) < 1e-12


def test_multi_controlled_phase_targets_all_ones():
    phi = 1.3
    g = MultiControlledPhase((1, 2, 3), phi)
    m = gate_matrix(g, 3)
    expected = np.eye(8, dtype=complex)
    expected[7, 7] = np.exp(1j * phi)
    assert np.max(np.abs(m - expected)) < 1e-12


def test_multi_controlled_phase_subset():
    # acting on qubits {1, 3} of 3: flips indices with bits 1 and 3 set
    phi = math.pi
    m = gate_matrix(MultiControlledPhase((1, 3), phi), 3)
    diag = np.diag(m)
    for idx in range(8):
        bit1 = (idx >> 2) & 1
        bit3 = idx & 1
        want = -1.0 if (bit1 and bit3) else 1.0
        assert diag[idx] == pytest.approx(want, abs=1e-12)


def test_multi_controlled_phase_qubit_order_irrelevant():
    a = gate_matrix(MultiControlledPhase((1, 2), 0.4), 2)
    b = gate_matrix(MultiControlledPhase((2, 1), 0.4), 2)
    assert np.max(np.abs(a - b)) < 1e-12


def test_diagonal_gates_commute():
    rng = np.random.default_rng(3)
    gates = [
        PhaseShift(1, 0.3),
        MultiControlledPhase((1, 2), 1.1),
        MultiControlledPhase((2, 3), -0.8),
        MultiControlledPhase((1, 2, 3), 2.2),
    ]
    amps = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    reg = QubitRegister.from_amplitudes(amps)
    fwd = apply_circuit(reg, gates)
    rev = apply_circuit(reg, list(reversed(gates)))
    assert np.max(np.abs(fwd.amplitudes - rev.amplitudes)) < 1e-12


def test_mcz_involution():
    reg = walsh_hadamard(QubitRegister.computational(3))
    g = MultiControlledPhase((1, 2, 3), math.pi)
    back = apply_gate(apply_gate(reg, g), g)
    assert np.max(np.abs(back.amplitudes - reg.amplitudes)) < 1e-12


# =====================================================================
# Walsh-Hadamard and the universal one-qubit gate
# =====================================================================


def test_walsh_hadamard_equal_coefficients():
    reg = walsh_hadamard(QubitRegister.computational(4))
    assert np.max(np.abs(reg.amplitudes - 0.25)) < 1e-12


def test_walsh_hadamard_is_involution():
    rng = np.random.default_rng(11)
    amps = rng.standard_normal(16) + 1j * rng.standard_normal(16)
    reg = QubitRegister.from_amplitudes(amps)
    back = walsh_hadamard(walsh_hadamard(reg))
    assert np.max(np.abs(back.amplitudes - reg.amplitudes)) < 1e-12


def test_one_qubit_universal_closed_form():
    theta, phi = 0.77, -1.9
    m = one_qubit_universal_matrix(theta, phi)
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    expected = np.array(
        [[c, -1j * s], [1j * np.exp(1j * phi) * s, -np.exp(1j * phi) * c]]
    )
    assert np.max(np.abs(m - expected)) < 1e-12


def test_one_qubit_universal_as_gate_product():
    # Z_{phi+pi} H Z_theta H reproduces the closed form up to the global
    # phase e^{i theta/2} that H Z_theta H carries
    for theta, phi in [(0.4, 0.9), (2.5, -0.6), (math.pi / 2, math.pi / 4)]:
        prod = (
            gate_matrix(PhaseShift(1, phi + math.pi), 1)
            @ gate_matrix(Hadamard(1), 1)
            @ gate_matrix(PhaseShift(1, theta), 1)
            @ gate_matrix(Hadamard(1), 1)
        )
        direct = np.exp(1j * theta / 2.0) * one_qubit_universal_matrix(theta, phi)
        assert np.max(np.abs(prod - direct)) < 1e-12


def test_one_qubit_universal_special_angles():
    m = one_qubit_universal_matrix(0.0, 0.0)
    assert np.max(np.abs(m - np.diag([1.0, -1.0]))) < 1e-12
    gm = gate_matrix(OneQubitUniversal(1, math.pi, 0.0), 1)
    # theta = pi gives an X up to the -i convention factor
    assert abs(abs(gm[0, 1]) - 1.0) < 1e-12
    assert abs(gm[0, 0]) < 1e-12


@pytest.mark.parametrize("n", [1, 2, 3])
def test_all_gates_unitary(n):
    rng = np.random.default_rng(5)
    gates = [Hadamard(1), PauliX(n), PhaseShift(1, 0.6)]
    if n >= 2:
        gates += [CNOT(1, 2), MultiControlledPhase((1, 2), 1.0)]
    gates.append(OneQubitUniversal(1, rng.uniform(0, math.pi), rng.uniform(-math.pi, math.pi)))
    for g in gates:
        m = gate_matrix(g, n)
        assert np.max(np.abs(m.conj().T @ m - np.eye(2**n))) < 1e-12


def test_inner_product_conjugates_first_argument():
    a = QubitRegister.from_amplitudes(np.array([1.0, 1j]) / math.sqrt(2.0))
    b = QubitRegister.from_amplitudes(np.array([1.0, 0.0], dtype=complex))
    assert inner_product(a, b) == pytest.approx((1.0 / math.sqrt(2.0)) + 0j)
    assert inner_product(a, a) == pytest.approx(1.0 + 0j)


# =====================================================================
# Angle and circuit text formats
# =====================================================================


def test_format_angle_pi_fractions():
    assert format_angle(math.pi) == "pi"
    assert format_angle(-math.pi / 2) == "-pi/2"
    assert format_angle(3 * math.pi / 4) == "3pi/4"
    assert format_angle(2 * math.pi / 3) == "2pi/3"


def test_parse_angle_forms():
    assert parse_angle("pi") == pytest.approx(math.pi)
    assert parse_angle("-pi/2") == pytest.approx(-math.pi / 2)
    assert parse_angle("3pi/4") == pytest.approx(3 * math.pi / 4)
    assert parse_angle("0.25") == pytest.approx(0.25)
    assert parse_angle("-1.5e-1") == pytest.approx(-0.15)


@pytest.mark.parametrize(
    "phi",
    [0.0, math.pi, -math.pi / 2, 5 * math.pi / 6, 0.123456, -2.71828],
)
def test_angle_roundtrip(phi):
    assert parse_angle(format_angle(phi)) == pytest.approx(phi, abs=1e-12)


def test_gate_text_roundtrip():
    gates = [
        Hadamard(2),
        PauliX(1),
        CNOT(1, 3),
        PhaseShift(3, math.pi / 2),
        MultiControlledPhase((1, 2), math.pi),
        MultiControlledPhase((1, 2, 3), -math.pi / 4),
        OneQubitUniversal(2, 0.6, 1.2),
    ]
    text = gates_to_text(gates)
    back = gates_from_text(text)
    assert len(back) == len(gates)
    for g, b in zip(gates, back):
        assert gate_matrix(g, 3) == pytest.approx(gate_matrix(b, 3), abs=1e-12)


def test_register_csv_rows():
    reg = QubitRegister.from_amplitudes(np.array([1.0, 0.0, 0.0, 1j]) / math.sqrt(2.0))
    rows = list(register_csv_rows(reg))
    assert rows[0][0] == "index"
    assert len(rows) == 5
    # last row is index 3 = bits 11
    assert rows[-1][1] == "11"


# =====================================================================
# Validation
# =====================================================================


def test_qubit_range_checked():
    reg = QubitRegister.computational(2)
    with pytest.raises(ValueError):
        apply_gate(reg, Hadamard(0))
    with pytest.raises(ValueError):
        apply_gate(reg, Hadamard(3))
    with pytest.raises(ValueError):
        CNOT(1, 1)
    with pytest.raises(ValueError):
        MultiControlledPhase((1, 1), 0.5)


def test_register_length_power_of_two():
    with pytest.raises(ValueError):
        QubitRegister.from_amplitudes(np.zeros(3, dtype=complex))
