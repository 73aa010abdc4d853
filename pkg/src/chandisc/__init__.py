"""Optimal single-shot discrimination of pairs of quantum channels."""
from .bounds import (
    ChannelPairProblem,
    OptimizerConfig,
    maxent_upper_bound,
    no_ancilla_upper_bound,
    perfect_distinguishability,
    prop1_lower_bound,
    sandwich_check,
)
from .core import (
    GATES,
    Channel,
    ChoiOperator,
    Effect,
    QuantumState,
    apply_channel,
    choi_of,
    omega_plus,
    partial_trace,
    validate_channel,
)
from .ppovm import ProcessPOVM, TestStrategy, outcome_probabilities, ppovm_of_strategy, validate_ppovm
from .states import TwoStateProblem, helstrom, posterior, unambiguous_pure
from .unitary import (
    FidelityResult,
    UnitaryPair,
    cb_process_fidelity,
    fidelity_bruteforce_oracle,
    min_error_unitary,
    saturation_check,
    unambiguous_unitary,
)

__version__ = "0.1.0"
