"""Disturbance-based quantumness of states and ensembles, and its role
in quantum data hiding."""

from .disturbance import (
    DisturbanceReport,
    OptimizerConfig,
    average_disturbance,
    edist_lower_bound,
    edist_simple_lower,
    edist_upper_bound,
    edist_upper_bound_limit,
    entanglement_of_disturbance,
    haar_average_disturbance,
    haar_bounds,
    implicit_residual,
    log_disturbance,
    max_disturbance_bound,
    quantumness,
)
from .hiding import (
    HidingReport,
    check_randomizing_pair,
    classical_hiding_limit,
    hiding_capability_bounds,
    werner_hiding_report,
)
from .measure import (
    MeasurementScope,
    ProjectiveMeasurement,
    apply_projective,
    fidelity,
    overlap_bounds,
    relative_entropy,
    trace_distance,
    von_neumann_entropy,
)
from .qubit import QubitEnsemble, qubit_ensemble_quantumness, two_state_formula
from .states import (
    Ensemble,
    PureState,
    QuantumState,
    SchmidtDecomposition,
    bloch_from_qubit,
    ensemble_from_dict,
    ensemble_to_dict,
    flagged_state,
    max_cq_qubit_state,
    maximally_entangled,
    qubit_from_bloch,
    randomized_hiding_pair,
    sample_haar_state,
    sample_haar_unitary,
    sample_mixed_state,
    schmidt_decompose,
    state_from_dict,
    state_to_dict,
    werner_states,
)

__version__ = "0.1.0"

__all__ = [
    "DisturbanceReport",
    "Ensemble",
    "HidingReport",
    "MeasurementScope",
    "OptimizerConfig",
    "ProjectiveMeasurement",
    "PureState",
    "QuantumState",
    "QubitEnsemble",
    "SchmidtDecomposition",
    "apply_projective",
    "average_disturbance",
    "bloch_from_qubit",
    "check_randomizing_pair",
    "classical_hiding_limit",
    "edist_lower_bound",
    "edist_simple_lower",
    "edist_upper_bound",
    "edist_upper_bound_limit",
    "ensemble_from_dict",
    "ensemble_to_dict",
    "entanglement_of_disturbance",
    "fidelity",
    "flagged_state",
    "haar_average_disturbance",
    "haar_bounds",
    "hiding_capability_bounds",
    "implicit_residual",
    "log_disturbance",
    "max_cq_qubit_state",
    "max_disturbance_bound",
    "maximally_entangled",
    "overlap_bounds",
    "quantumness",
    "qubit_ensemble_quantumness",
    "qubit_from_bloch",
    "randomized_hiding_pair",
    "relative_entropy",
    "sample_haar_state",
    "sample_haar_unitary",
    "sample_mixed_state",
    "schmidt_decompose",
    "state_from_dict",
    "state_to_dict",
    "trace_distance",
    "two_state_formula",
    "von_neumann_entropy",
    "werner_hiding_report",
    "werner_states",
]
