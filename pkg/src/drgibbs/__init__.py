"""Exact spectral data, Gibbs states, and scaling limits for
distance-regular graphs with classical parameters."""

from .params import (
    ClassicalParams,
    FeasibilityReport,
    InfeasibleParameters,
    InternalConsistencyError,
    IntersectionArray,
    SpectralTable,
    feasibility_check,
    intersection_array,
    spectral_table,
)
from .gibbs import (
    DiscreteMeasure,
    GibbsPoint,
    check_negative_powers,
    gibbs_distribution,
    gibbs_point,
    in_pi,
    measure_moment,
)
from .qseries import ApproxScalar, gauss_bracket, gen_poch, phi_terminating, poch, poch_inf

__version__ = "0.1.0"

__all__ = [
    "ApproxScalar",
    "ClassicalParams",
    "DiscreteMeasure",
    "FeasibilityReport",
    "GibbsPoint",
    "InfeasibleParameters",
    "InternalConsistencyError",
    "IntersectionArray",
    "SpectralTable",
    "check_negative_powers",
    "feasibility_check",
    "gauss_bracket",
    "gen_poch",
    "gibbs_distribution",
    "gibbs_point",
    "in_pi",
    "intersection_array",
    "measure_moment",
    "phi_terminating",
    "poch",
    "poch_inf",
    "spectral_table",
]
