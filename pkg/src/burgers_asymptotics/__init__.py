"""Long-time asymptotics of viscous Burgers with slowly decaying initial data."""

from .asymptotics import (
    Extrapolation,
    RateFit,
    ZoomFrame,
    extrapolate,
    geometric_times,
    nested_partial_sum,
    nested_residual,
    predicted_branch_gap,
    q_estimate,
    rate_fit,
    tie_offset,
    zoom_exponent,
    zoom_sample,
)
from .critical import (
    CriticalStructure,
    LeadingTail,
    branch_gap,
    find_zc,
    finite_t_maxima,
    h_infinity,
    p_correction,
    profile_p,
    root_shift_coefficient,
    y_star,
    y_star_prime,
)
from .errors import (
    AdmissibilityError,
    AmbiguousBranchError,
    BranchMissingError,
    BurgersError,
    DegenerateLandscapeError,
    FoldError,
    QuadratureError,
    StabilityError,
    StructuralError,
)
from .initial_data import DatumSpec, PowerTail, TailFamily, construct_datum, nested, single, two_term, zero_datum
from .landscape import Frame, LandscapeReport, ht_eval, max_gap, scan_landscape
from .oracle import OracleGrid, compare, integrate
from .solver import QuadratureOptions, SolutionSample, laplace_approximation, physical_solution, rescaled_solution

__version__ = "0.1.0"
