"""Linear stability of N-body motions under homogeneous potentials, in the mass metric."""

__version__ = "0.1.0"

from .central import (
    ADForm,
    CentralConfiguration,
    GascheauParams,
    central_configuration,
    central_residual,
    closed_form_AD,
    equilateral,
    find_central,
    gascheau,
    lagrange,
    masses_for_mu,
    restricted_AD,
    strong_minimizer,
    strong_nondegeneracy,
)
from .core import (
    Configuration,
    MassSystem,
    Subspace,
    build_subspaces,
    center,
    centered_subspace,
    coplanar_subspace,
    delta_subspace,
    full_space,
    isosceles_subspace,
    mass_inner,
)
from .exceptions import (
    CollisionApproachError,
    CollisionError,
    HypothesisError,
    InvalidInputError,
    InvalidSubspaceError,
    NBodyError,
    NotFoundError,
    SearchFailureError,
    UnsupportedDimensionError,
)
from .linstab import (
    MonodromyReport,
    classify_motion,
    comparison_theorem_check,
    jacobi_integrate,
    keplerian_lower_bound,
    lagrange_motion,
    monodromy,
    splitting_verify,
    stability_transition,
)
from .orbits import KeplerOrbit, homographic_motion, integrate_newton, solve_kepler
from .potential import Potential, gradient, hessian, value

__all__ = [
    "ADForm",
    "build_subspaces",
    "center",
    "centered_subspace",
    "central_configuration",
    "central_residual",
    "CentralConfiguration",
    "classify_motion",
    "closed_form_AD",
    "CollisionApproachError",
    "CollisionError",
    "comparison_theorem_check",
    "Configuration",
    "coplanar_subspace",
    "delta_subspace",
    "equilateral",
    "find_central",
    "full_space",
    "gascheau",
    "GascheauParams",
    "gradient",
    "hessian",
    "homographic_motion",
    "HypothesisError",
    "integrate_newton",
    "InvalidInputError",
    "InvalidSubspaceError",
    "isosceles_subspace",
    "jacobi_integrate",
    "keplerian_lower_bound",
    "KeplerOrbit",
    "lagrange",
    "lagrange_motion",
    "mass_inner",
    "masses_for_mu",
    "MassSystem",
    "monodromy",
    "MonodromyReport",
    "NBodyError",
    "NotFoundError",
    "Potential",
    "restricted_AD",
    "SearchFailureError",
    "solve_kepler",
    "splitting_verify",
    "stability_transition",
    "strong_minimizer",
    "strong_nondegeneracy",
    "Subspace",
    "UnsupportedDimensionError",
    "value",
]
