"""Coupled-oscillator synchronization toolkit.

Simulation of all-to-all phase-oscillator networks (first-order, mixed
first/second-order, and scaled variants), critical-coupling estimates,
cohesiveness and convergence-rate guarantees, and equilibrium stability
analysis, with a configuration-driven CLI for reproducible studies.
"""

__version__ = "0.1.0"

from .bounds import (
    BoundReport,
    ErmentroutResult,
    ExactCouplingResult,
    PerformanceEnvelope,
    bound_report,
    continuum_kuramoto_bound,
    ermentrout_bound,
    exact_implicit_coupling,
    explicit_critical_coupling,
    necessary_bound,
    performance_envelope,
    sinc,
)
from .dynamics import (
    MODELS,
    NetworkSpec,
    State,
    Trajectory,
    arc_derivative_bound,
    consensus_diagnostics,
    integrate,
    interaction_laplacian,
    interaction_weights,
    laplacian_pseudoinverse,
    vector_field,
)
from .errors import (
    BracketError,
    ConfigError,
    EquilibriumNotFound,
    KurasyncError,
    NoSynchronizationGuarantee,
    NumericalFailure,
)
from .experiments import ScenarioResult, StudyRow, fit_decay_rate, run_scenario, run_study
from .profiles import (
    ConstantProfile,
    DampingInertiaSpec,
    FrequencyProfile,
    OmegaStats,
    SinusoidalProfile,
    SwitchingProfile,
    bipolar_profile,
    omega_stats,
    omega_sync,
    scaled_frequencies,
    uniform_sample_profile,
)
from .stability import (
    ConjugacyReport,
    Equilibrium,
    HLambdaSpec,
    Inertia,
    MultiRateSyncReport,
    StabilityReport,
    analyze_equilibrium,
    conjugacy_check,
    find_equilibrium,
    hlambda_vector_field,
    inertia,
    jacobian_hlambda,
    multirate_sync_report,
    potential_gradient,
    potential_hessian,
    potential_value,
)
from .torus import (
    OrderParameter,
    PhaseVector,
    arc_extremes,
    arc_from_order,
    cohesiveness_bounds,
    enclosing_arc_length,
    geodesic_distance,
    order_parameter,
    wrap_angle,
)

__all__ = [name for name in dir() if not name.startswith("_")]
