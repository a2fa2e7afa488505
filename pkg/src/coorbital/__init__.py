"""Inclined co-orbital periodic orbits of the planetary three-body problem.

The package computes, continues, and stability-classifies the vertical family
of inclined co-orbital configurations in the node-reduced three-body problem,
together with the circular averaged co-orbital model, its elliptic-integral
closed form and series approximations, and batch stability cartography.
"""

from .errors import (
    BracketInvalid,
    BranchExhausted,
    CollisionError,
    ContinuationStalled,
    CoorbitalError,
    DegenerateEquilibrium,
    DomainError,
    InterpolationError,
    NoConvergence,
    RankDeficiency,
    SingularIntegrand,
    StepFailure,
)
from .hill import (
    GASCHEAU_EPS,
    CartesianState,
    HillState,
    LagrangeSpectrum,
    MassConfig,
    ReducedParameter,
    cartesian_to_hill,
    hamiltonian,
    lagrange_anomaly_coeffs,
    lagrange_equilibrium,
    lagrange_spectrum,
    mutual_inclination,
    node_rate,
    to_cartesian,
    vector_field,
)
from .flow import (
    FlowResult,
    VariationalResult,
    integrate_node_precession,
    propagate,
    propagate_variational,
)

__all__ = [
    "BracketInvalid",
    "BranchExhausted",
    "CollisionError",
    "ContinuationStalled",
    "CoorbitalError",
    "DegenerateEquilibrium",
    "DomainError",
    "InterpolationError",
    "NoConvergence",
    "RankDeficiency",
    "SingularIntegrand",
    "StepFailure",
    "GASCHEAU_EPS",
    "CartesianState",
    "HillState",
    "LagrangeSpectrum",
    "MassConfig",
    "ReducedParameter",
    "cartesian_to_hill",
    "hamiltonian",
    "lagrange_anomaly_coeffs",
    "lagrange_equilibrium",
    "lagrange_spectrum",
    "mutual_inclination",
    "node_rate",
    "to_cartesian",
    "vector_field",
    "FlowResult",
    "VariationalResult",
    "integrate_node_precession",
    "propagate",
    "propagate_variational",
]

__version__ = "0.1.0"
