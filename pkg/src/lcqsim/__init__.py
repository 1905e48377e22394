"""Quantum gate simulation on networks of LC resonators.

The package models banks of LC resonators, one per computational basis
state, whose amplitudes and phases carry an N-qubit wavefunction.
Capacitance pulses realize phase-shift gates, inductive bridge pulses
realize mixing/NOT gates, and compositions give Hadamard, CNOT and
multi-controlled phase gates.  On top of the circuit layer sit exact
register arithmetic, equal-weight state synthesis, an inner-product
circuit planner with light-cone pruning, and a pattern-recognition
layer for perceptron-style similarity experiments.
"""

from .pulses import PulseProfile, pulse_area, pulse_value
from .network import (
    AnalogState,
    Bridge,
    Resonator,
    ResonatorNetwork,
    SimConfig,
    Trajectory,
    assemble_generator,
    extract_phase_amplitude,
    integrate,
    to_wavefunction,
    total_energy,
)
from .ideal import (
    CNOT,
    GateOp,
    Hadamard,
    MultiControlledPhase,
    OneQubitUniversal,
    PauliX,
    PhaseShift,
    QubitRegister,
    apply_circuit,
    apply_gate,
    inner_product,
    walsh_hadamard,
)
from .gates import (
    AnalogGateReport,
    GateSchedule,
    berry_phase,
    cnot_schedule,
    compose_hadamard,
    controlled_phase_schedule,
    design_mixing,
    design_not,
    design_phase_shift,
    multi_controlled_phase_schedule,
    run_gate,
    snapshot_frequencies,
)
from .synthesis import (
    HypergraphState,
    PhasePattern,
    SignPattern,
    state_counts,
    synthesize_cew,
    synthesize_rew,
)
from .patterns import (
    Pattern,
    PatternSet,
    digit_corpus,
    encode_pattern,
    n_error,
    pixel_inner,
    recognize,
    similarity_matrix,
)
from .planner import (
    ResonatorPlan,
    execute,
    hadamard_bridges,
    plan_inner_product,
    prune,
)

__version__ = "0.1.0"
