"""Large-deviation toolkit for molecular-motor random walks on quasi-1d lattices.

A fundamental cell graph, glued end to end at its source/sink gates, carries a
continuous-time walk whose gate-level skeleton regenerates cycle by cycle.
This package computes the walk's velocity, the moment generating functions of
its regeneration cycles and gate hitting times, the large-deviation rate
functions of position and hitting times (by two independent routes: renewal
transforms and a tilted-matrix spectral problem), the Gallavotti-Cohen
fluctuation symmetry and its structural criterion, and exact Monte Carlo
samplers with bootstrap machinery to confront all of it with simulation.
"""

from .errors import (
    AsymmetricGrid,
    AsymmetricSupport,
    BracketFailure,
    DomainError,
    GraphSpecError,
    InsufficientSamples,
    InternalInconsistency,
    LawSpecError,
    MotorldError,
    NoOverlap,
    NonConvergence,
    NotMinimal,
    NumericalError,
    OutOfHorizon,
    RunawaySimulation,
    SingularSystem,
    SpecificationError,
)
from .graph import (
    FundamentalGraph,
    LatticeVertex,
    MinimalityReport,
    ValidationReport,
    enumerate_gate_paths,
    gate_exit_rate,
    gc_delta,
    graph_from_dict,
    graph_to_dict,
    is_minimal,
    lattice_out_edges,
    load_graph,
    minimality_report,
    validate,
    vertex_exit_rate,
)
from .laws import (
    CycleLaw,
    DiscreteLaw,
    ExponentialLaw,
    GammaLaw,
    GraphLaw,
    atom_sign_mass,
    law_from_dict,
    law_to_dict,
    load_law,
    validate_law,
)
from .renewal import (
    FPair,
    MgfSummary,
    TildeTriple,
    alpha_pm,
    atom_mass_at_alpha,
    f_pm,
    lambda_c,
    lambda_interior,
    log_phi,
    log_phi_deriv,
    mean_tau,
    mgf_summary,
    p_pm,
    pathsum_truncation_length,
    phi_pm,
    tilde_f,
    tilde_f_pathsum,
    velocity,
)
from .ratefn import (
    I,
    J,
    QualSummary,
    RateCurve,
    qualitative_summary,
    rate_curve,
    tilde_lambda,
)
from .spectral import (
    I_spectral,
    Lambda,
    Lambda_prime,
    TiltedMatrix,
    build_A,
    spectral_check_domain,
)
from .simulate import (
    CumulativeTrajectory,
    CycleSample,
    HittingResult,
    SkeletonPath,
    Trajectory,
    sample_cumulative,
    sample_cycle,
    sample_cycles,
    sample_hitting_time,
    sample_hitting_times,
    sample_positions,
    simulate_trajectory,
    skeleton,
    spawn_rngs,
)
from .gc import (
    GcReport,
    TestReport,
    gc_check_analytic,
    gc_predict,
    gc_symmetry_residual,
    independence_test,
)
from .mc import (
    ComparisonReport,
    EmpiricalCurve,
    compare_curves,
    empirical_rate_hitting,
    empirical_rate_position,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "MotorldError",
    "SpecificationError",
    "NumericalError",
    "GraphSpecError",
    "LawSpecError",
    "NotMinimal",
    "AsymmetricSupport",
    "AsymmetricGrid",
    "DomainError",
    "OutOfHorizon",
    "InsufficientSamples",
    "NoOverlap",
    "SingularSystem",
    "BracketFailure",
    "NonConvergence",
    "RunawaySimulation",
    "InternalInconsistency",
    # graph
    "FundamentalGraph",
    "LatticeVertex",
    "ValidationReport",
    "MinimalityReport",
    "validate",
    "vertex_exit_rate",
    "gate_exit_rate",
    "lattice_out_edges",
    "enumerate_gate_paths",
    "minimality_report",
    "is_minimal",
    "gc_delta",
    "graph_from_dict",
    "graph_to_dict",
    "load_graph",
    # laws
    "CycleLaw",
    "GraphLaw",
    "DiscreteLaw",
    "ExponentialLaw",
    "GammaLaw",
    "validate_law",
    "law_from_dict",
    "law_to_dict",
    "load_law",
    "atom_sign_mass",
    # renewal
    "TildeTriple",
    "FPair",
    "MgfSummary",
    "tilde_f",
    "tilde_f_pathsum",
    "pathsum_truncation_length",
    "lambda_interior",
    "f_pm",
    "lambda_c",
    "phi_pm",
    "log_phi",
    "log_phi_deriv",
    "alpha_pm",
    "atom_mass_at_alpha",
    "p_pm",
    "mean_tau",
    "velocity",
    "mgf_summary",
    # rate functions
    "tilde_lambda",
    "J",
    "I",
    "RateCurve",
    "rate_curve",
    "QualSummary",
    "qualitative_summary",
    # spectral route
    "TiltedMatrix",
    "build_A",
    "Lambda",
    "Lambda_prime",
    "I_spectral",
    "spectral_check_domain",
    # simulation
    "CycleSample",
    "Trajectory",
    "SkeletonPath",
    "HittingResult",
    "CumulativeTrajectory",
    "sample_cycle",
    "sample_cycles",
    "simulate_trajectory",
    "skeleton",
    "sample_hitting_time",
    "sample_hitting_times",
    "sample_cumulative",
    "sample_positions",
    "spawn_rngs",
    # fluctuation symmetry
    "GcReport",
    "TestReport",
    "gc_check_analytic",
    "gc_predict",
    "independence_test",
    "gc_symmetry_residual",
    # Monte Carlo confrontation
    "EmpiricalCurve",
    "ComparisonReport",
    "empirical_rate_position",
    "empirical_rate_hitting",
    "compare_curves",
]
