"""Entanglement-enhanced communication through dimerized Heisenberg chains.

Exact-diagonalization-scale toolkit: sector-aware state vectors, matrix-free
chain Hamiltonians, Lanczos ground states, Krylov time evolution, and the
classical (Bell-decoding / Holevo) and quantum (remote-state-preparation)
protocol metrics, plus attach-a-qubit baselines and a sweep runner.
"""

from .basis import BASIS_CONVENTION, sector_states
from .model import ChainSpec, Hamiltonian, apply_hamiltonian, build_chain, sector_decompose
from .solvers import (
    ConvergenceError,
    GroundStateResult,
    PropagatorConfig,
    energy_expectation,
    evolve,
    evolve_series,
    ground_state,
    iter_evolved,
)
from .sphere import SphereRule, sphere_rule
from .states import (
    BELL_LABELS,
    DensityMatrix,
    StateVector,
    WernerFit,
    apply_pauli,
    apply_rotation,
    bell_state,
    partial_trace,
    singlet_product_state,
    singlet_state,
    state_fidelity,
    von_neumann_entropy,
    werner_p,
)
from .timeseries import LinearFit, PeakResult, TimeSeries, find_first_peak, find_optimal_time, fit_linear
from .classical import ClassicalProtocolResult, bell_fidelity_series, encode_classical, holevo_series, run_classical
from .quantum import (
    QuantumProtocolResult,
    ScalingResult,
    average_fidelity_analytic,
    average_fidelity_quadrature,
    encode_quantum,
    fidelity_scaling,
    measurement_fidelity,
    run_quantum,
)
from .attaching import (
    AttachingResult,
    StrategyComparison,
    attach_initial_state,
    attaching_average_fidelity,
    compare_strategies,
    magnon_closed_form,
    magnon_transition_amplitude,
    run_attaching,
)

__version__ = "0.1.0"
