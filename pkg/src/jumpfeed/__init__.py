"""Jump-based feedback control of two coupled qubits.

Library plus CLI simulating a pair of exchange-coupled qubits where the
second one decays and is kicked by a control unitary after every detected
emission.  Deterministic RK4 master-equation integration is cross-checked
by a stochastic trajectory unraveling; observables cover the reduced state
of qubit 1 (populations, coherence, Bloch vector) and the two-qubit
concurrence.
"""

__version__ = "0.1.0"

from .experiments import (
    FIGURE_IDS,
    InitialState,
    SweepGrid,
    SweepSpec,
    UnknownFigure,
    run_preset,
    sweep,
)
from .integrator import (
    IntegrationConfig,
    StateCorrupted,
    TimeSeries,
    evolve,
    rk4_step,
)
from .linalg import (
    NotHermitian,
    NotPositive,
    dagger,
    hermitian_eigenvalues,
    hermitian_sqrt,
    kron,
)
from .model import (
    FeedbackVector,
    RotationForm,
    SystemParams,
    build_feedback_unitary,
    build_hamiltonian,
    feedback_rhs,
    jump_operator,
    lindblad_rhs,
    rotation_to_amplitudes,
    validate_density_matrix,
)
from .observables import (
    ObservableRecord,
    bloch_vector,
    coherence_and_populations,
    concurrence,
    partial_trace_qubit2,
    purity,
    spin_flip,
)
from .trajectories import (
    EnsembleConfig,
    NotPure,
    ZeroNorm,
    run_ensemble,
    run_trajectory,
    trajectory_seed,
    trajectory_step,
)

__all__ = [
    "__version__",
    "FIGURE_IDS",
    "InitialState",
    "SweepGrid",
    "SweepSpec",
    "UnknownFigure",
    "run_preset",
    "sweep",
    "IntegrationConfig",
    "StateCorrupted",
    "TimeSeries",
    "evolve",
    "rk4_step",
    "NotHermitian",
    "NotPositive",
    "dagger",
    "hermitian_eigenvalues",
    "hermitian_sqrt",
    "kron",
    "FeedbackVector",
    "RotationForm",
    "SystemParams",
    "build_feedback_unitary",
    "build_hamiltonian",
    "feedback_rhs",
    "jump_operator",
    "lindblad_rhs",
    "rotation_to_amplitudes",
    "validate_density_matrix",
    "ObservableRecord",
    "bloch_vector",
    "coherence_and_populations",
    "concurrence",
    "partial_trace_qubit2",
    "purity",
    "spin_flip",
    "EnsembleConfig",
    "NotPure",
    "ZeroNorm",
    "run_ensemble",
    "run_trajectory",
    "trajectory_seed",
    "trajectory_step",
]
