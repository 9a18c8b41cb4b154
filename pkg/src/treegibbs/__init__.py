"""Translation-invariant Gibbs measures of a [0,1]-spin model on a Cayley tree.

The fixed-point problem ``f = H_k f`` for the Hammerstein operator with a
rank-two kernel is reduced exactly to a single even polynomial in the ratio
``lam = y/x``; a quadrature oracle solves the same problem independently.
"""

from .model import (
    KernelPositivityWarning,
    ModelParams,
    NumericsConfig,
    basis_moment,
    check_kernel_positivity,
    kernel_eval,
    odd_root,
    phi,
    validate_kernel_positivity,
)
from .quadrature import (
    Divergence,
    GridFunction,
    QuadratureRule,
    apply_hammerstein,
    build_rule,
    fixed_point_grid,
    multi_start_fixed_points,
    picard_solve,
    project_affine,
    residual_norm,
)
from .reduction import (
    EvenPolynomial,
    InconsistencyError,
    ParametricFixedPoint,
    ReducedCoefficients,
    build_polynomial,
    positive_root,
    reconstruct_fixed_points,
    reduced_coefficients,
    reduced_map,
)
from .phase import (
    Classification,
    MonotonicityWarning,
    PhaseResult,
    Region,
    SweepRow,
    classify,
    phase_regions,
    ratio_threshold,
    sweep,
)

__version__ = "0.1.0"
