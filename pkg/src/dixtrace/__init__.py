"""Weak-trace functionals of positive compact operators from spectral data.

The package evaluates logarithmic-average traces and zeta-function residues
of operators given by their singular value sequences, cross-validates the
two routes against each other, realizes the vector-state structure of the
normalized functional, and ships worked models (the circle and the rotation
algebra) plus executable property suites for the underlying sequence
transforms and algebra axioms.
"""

from ._backend import backend_name
from .config import LadderPlan, RunConfig
from .errors import (
    DixtraceError,
    DomainError,
    ExtrapolationUnreliableError,
    IllPosedError,
    InsufficientDataError,
    InvariantViolation,
    RouteUnavailableError,
    UnachievableToleranceError,
)
from .genlimits import (
    BoundedSequence,
    ExplicitStep,
    LimitEstimate,
    StepFunction,
    calL_sequence,
    cesaro,
    dilate,
    exp_substitute,
    floor_lift,
    limit_estimate,
    shift,
)
from .models import (
    FourierElement,
    NctInvLaplacian,
    TorusFunction,
    TorusInvLaplacian,
    cantor_enum,
    gns_norm,
    nct_diag,
    nct_identity,
    nct_involution,
    nct_product,
    nct_tau0,
    nct_unitary_u,
    nct_unitary_v,
    torus_multiplier_diag,
)
from .normality import (
    GridProfileWitness,
    ProjectionProfileWitness,
    approximate_projection,
    dominated_check,
    monotone_convergence_check,
    truncate_observable,
)
from .quantum import NormalizedIntegral, diagonal_limit, phi, structure_check, theta_pairing
from .residue import (
    ResidueCurve,
    dixmier_log_average,
    dixmier_residue,
    measurability_diagnostic,
    residue_curve,
    richardson_extrapolate,
)
from .spectral import (
    DiagonalObservable,
    DyadicBlockLaw,
    EigenvalueSequence,
    ExplicitSequence,
    LimitModel,
    PowerLaw,
    TailModel,
    ZetaSamples,
    l1inf_norm_estimate,
    load_observable,
    load_operator,
    log_average,
    mu,
    zeta,
)
from .propsuite import run_suite

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "backend_name",
    "LadderPlan",
    "RunConfig",
    "DixtraceError",
    "DomainError",
    "ExtrapolationUnreliableError",
    "IllPosedError",
    "InsufficientDataError",
    "InvariantViolation",
    "RouteUnavailableError",
    "UnachievableToleranceError",
    "BoundedSequence",
    "ExplicitStep",
    "LimitEstimate",
    "StepFunction",
    "calL_sequence",
    "cesaro",
    "dilate",
    "exp_substitute",
    "floor_lift",
    "limit_estimate",
    "shift",
    "FourierElement",
    "NctInvLaplacian",
    "TorusFunction",
    "TorusInvLaplacian",
    "cantor_enum",
    "gns_norm",
    "nct_diag",
    "nct_identity",
    "nct_involution",
    "nct_product",
    "nct_tau0",
    "nct_unitary_u",
    "nct_unitary_v",
    "torus_multiplier_diag",
    "GridProfileWitness",
    "ProjectionProfileWitness",
    "approximate_projection",
    "dominated_check",
    "monotone_convergence_check",
    "truncate_observable",
    "NormalizedIntegral",
    "diagonal_limit",
    "phi",
    "structure_check",
    "theta_pairing",
    "ResidueCurve",
    "dixmier_log_average",
    "dixmier_residue",
    "measurability_diagnostic",
    "residue_curve",
    "richardson_extrapolate",
    "DiagonalObservable",
    "DyadicBlockLaw",
    "EigenvalueSequence",
    "ExplicitSequence",
    "LimitModel",
    "PowerLaw",
    "TailModel",
    "ZetaSamples",
    "l1inf_norm_estimate",
    "load_observable",
    "load_operator",
    "log_average",
    "mu",
    "zeta",
    "run_suite",
]
