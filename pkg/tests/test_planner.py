"""Inner-product plans: layer structure, pruning, both backends."""

import math

import numpy as np
import pytest

from lcqsim.ideal import inner_product
from lcqsim.patterns import encode_pattern, state_w_pattern, state_x_pattern
from lcqsim.planner import (
    HadamardBridge,
    PhaseShiftStep,
    ResonatorPlan,
    execute,
    hadamard_bridges,
    plan_from_text,
    plan_inner_product,
    plan_to_text,
    prune,
)
from lcqsim.synthesis import PhasePattern, SignPattern

PI = math.pi
COARSE_STEP = 2.0 * PI / 100.0  # integrator error ~1e-4, far under tolerance


def random_sign_pattern(rng, n):
    return SignPattern.from_signs(rng.choice([1, -1], size=2**n))


# =====================================================================
# Layer structure
# =====================================================================


def test_hadamard_bridges_pair_counts():
    for n in range(1, 7):
        for s in range(1, n + 1):
            pairs = hadamard_bridges(n, s)
            assert len(pairs) == 2 ** (n - 1)
            # disjoint cover of all 2^n indices
            flat = [j for pair in pairs for j in pair]
            assert sorted(flat) == list(range(2**n))


def test_hadamard_bridges_qubit_one_pairs():
    # qubit 1 toggles the most significant bit: j is paired with j + 8
    assert hadamard_bridges(4, 1) == [(j, j + 8) for j in range(8)]
    assert hadamard_bridges(4, 4) == [(j, j + 1) for j in range(0, 16, 2)]


def test_plan_counts_full():
    for n in range(1, 7):
        x = SignPattern.from_signs([1] * 2**n)
        plan = plan_inner_product(x, x)
        assert plan.full_bridge_count == 2 * n * 2 ** (n - 1)
        assert plan.bridge_count == plan.full_bridge_count


def test_plan_phase_steps_skip_zero_angles():
    signs = [1] * 8
    signs[3] = -1
    x = SignPattern.from_signs(signs)
    w = SignPattern.from_signs([1] * 8)
    plan = plan_inner_product(x, w)
    ps = [s for s in plan.steps if isinstance(s, PhaseShiftStep)]
    assert len(ps) == 1
    assert ps[0].resonator == 3
    assert ps[0].phi == pytest.approx(PI)


def test_plan_validation():
    with pytest.raises(ValueError):
        HadamardBridge(1, ((0, 1), (1, 2)))  # resonator 1 used twice
    with pytest.raises(ValueError):
        ResonatorPlan(2, (HadamardBridge(1, ((0, 1),)),), 8)  # wrong pair bit


# =====================================================================
# Pruning
# =====================================================================


@pytest.mark.parametrize("n", range(1, 7))
def test_pruned_bridge_counts(n):
    x = SignPattern.from_signs([1] * 2**n)
    plan = prune(plan_inner_product(x, x))
    # each transform keeps 2^n - 1 of its n 2^{n-1} bridges
    assert plan.bridge_count == 2 * (2**n - 1)
    assert plan.full_bridge_count == 2 * n * 2 ** (n - 1)


def test_pruned_layer_profile():
    # forward transform keeps 2^{s-1} pairs in layer s, backward the mirror
    n = 4
    x = SignPattern.from_signs([1] * 16)
    plan = prune(plan_inner_product(x, x))
    hb = [s for s in plan.steps if isinstance(s, HadamardBridge)]
    sizes = [len(s.pairs) for s in hb]
    assert sizes == [1, 2, 4, 8, 8, 4, 2, 1]


def test_prune_preserves_y0():
    rng = np.random.default_rng(31)
    for n in (2, 3, 4):
        for _ in range(5):
            x = random_sign_pattern(rng, n)
            w = random_sign_pattern(rng, n)
            full = plan_inner_product(x, w)
            y_full = execute(full)
            y_out = execute(prune(full, variant="output"))
            assert abs(y_out[0] - y_full[0]) < 1e-10


def test_prune_complete_final_preserves_all_outputs():
    rng = np.random.default_rng(33)
    for _ in range(5):
        x = random_sign_pattern(rng, 3)
        w = random_sign_pattern(rng, 3)
        full = plan_inner_product(x, w)
        kept = prune(full, variant="complete-final")
        assert np.max(np.abs(execute(kept) - execute(full))) < 1e-10


def test_prune_output_variant_touches_other_outputs():
    # dropping final-transform bridges must change some y_j, j > 0,
    # otherwise the pruning did nothing
    x = SignPattern.from_signs([1, -1, 1, 1, -1, 1, 1, 1])
    w = SignPattern.from_signs([1, 1, -1, 1, 1, 1, -1, 1])
    full = plan_inner_product(x, w)
    pruned = prune(full, variant="output")
    diff = np.abs(execute(pruned) - execute(full))
    assert diff[0] < 1e-10
    assert np.max(diff[1:]) > 1e-3


def test_prune_variant_validated():
    x = SignPattern.from_signs([1, 1])
    with pytest.raises(ValueError):
        prune(plan_inner_product(x, x), variant="everything")


# =====================================================================
# Ideal backend
# =====================================================================


def test_all_plus_gives_unit_overlap():
    x = SignPattern.from_signs([1] * 16)
    y = execute(plan_inner_product(x, x))
    assert y[0] == pytest.approx(1.0, abs=1e-12)
    assert np.max(np.abs(y[1:])) < 1e-12


def test_ideal_y0_equals_register_inner_product():
    rng = np.random.default_rng(37)
    for n in (1, 2, 3, 4):
        for _ in range(8):
            x = random_sign_pattern(rng, n)
            w = random_sign_pattern(rng, n)
            y = execute(plan_inner_product(x, w))
            from lcqsim.ideal import QubitRegister

            rx = QubitRegister.from_amplitudes(x.amplitudes())
            rw = QubitRegister.from_amplitudes(w.amplitudes())
            assert abs(y[0] - inner_product(rw, rx)) < 1e-12
            # sign inputs keep every output real
            assert np.max(np.abs(y.imag)) < 1e-12


def test_worked_four_qubit_example():
    x = SignPattern.from_signs([complex(v).real for v in state_x_pattern().values])
    w = SignPattern.from_signs([complex(v).real for v in state_w_pattern().values])
    y = execute(plan_inner_product(x, w))
    assert y[0] == pytest.approx(0.375, abs=1e-12)
    rx = encode_pattern(state_x_pattern())
    rw = encode_pattern(state_w_pattern())
    assert inner_product(rw, rx) == pytest.approx(0.375, abs=1e-12)


def test_phase_pattern_plan():
    rng = np.random.default_rng(41)
    phases_x = rng.uniform(-PI, PI, 8)
    phases_x[0] = 0.0
    phases_w = rng.uniform(-PI, PI, 8)
    phases_w[0] = 0.0
    x = PhasePattern.from_phases(phases_x)
    w = PhasePattern.from_phases(phases_w)
    y = execute(plan_inner_product(x, w))
    expect = np.vdot(w.amplitudes(), x.amplitudes())
    assert abs(y[0] - expect) < 1e-12


# =====================================================================
# Analog backend
# =====================================================================


def test_analog_matches_ideal_over_random_pairs():
    # fifty random sign-pattern pairs across one to three qubits
    rng = np.random.default_rng(5150)
    cases = [1] * 10 + [2] * 20 + [3] * 20
    worst = 0.0
    for n in cases:
        x = random_sign_pattern(rng, n)
        w = random_sign_pattern(rng, n)
        plan = prune(plan_inner_product(x, w))
        y_ideal = execute(plan, backend="ideal")
        y_analog = execute(plan, backend="analog", step_size=COARSE_STEP)
        worst = max(worst, abs(y_analog[0] - y_ideal[0]))
    assert worst < 1e-2


def test_analog_qubit_guard():
    x = SignPattern.from_signs([1] * 32)
    plan = prune(plan_inner_product(x, x))
    with pytest.raises(ValueError):
        execute(plan, backend="analog", max_qubits=4)


def test_unknown_backend():
    x = SignPattern.from_signs([1, 1])
    with pytest.raises(ValueError):
        execute(plan_inner_product(x, x), backend="quantum")


# =====================================================================
# Plan text format
# =====================================================================


def test_plan_text_roundtrip():
    x = SignPattern.from_signs([1, -1, 1, 1, -1, 1, 1, -1])
    w = SignPattern.from_signs([1, 1, 1, -1, 1, -1, 1, 1])
    plan = prune(plan_inner_product(x, w))
    back = plan_from_text(plan_to_text(plan))
    assert back.n_qubits == plan.n_qubits
    assert back.full_bridge_count == plan.full_bridge_count
    assert len(back.steps) == len(plan.steps)
    assert np.max(np.abs(execute(back) - execute(plan))) < 1e-12


def test_plan_text_shape():
    x = SignPattern.from_signs([1, -1])
    text = plan_to_text(plan_inner_product(x, x))
    lines = text.strip().splitlines()
    assert lines[0].startswith("plan 1")
    assert any(ln.startswith("HB 1 0 1") for ln in lines)
    assert any(ln.startswith("PS 1 ") for ln in lines)
