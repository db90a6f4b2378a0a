"""Pseudospectral laboratory for the "good" Boussinesq equation.

Linear propagators, a Duhamel fixed-point solver with contraction
diagnostics, Sobolev and dispersive space-time norms, numerical oracles for
the bilinear-estimate machinery, and growth-rate experiments measuring the
two low-regularity breakdown mechanisms.
"""

from .counterexamples import (
    BilinearQuadrature,
    GrowthReport,
    RotatedRectangle,
    SmallnessError,
    bilinear_BN,
    bilinear_slope,
    fit_loglog,
    frechet_second_derivative,
    illposedness_kernel,
    illposedness_kernel_quadrature,
    illposedness_norm,
    illposedness_slope,
    indicator_convolution,
    make_AN,
    minimal_smallness_N,
    polygon_overlap_area,
    support_interval,
)
from .estimates import (
    EmptyRegionSample,
    EstimateParams,
    RegionTag,
    algebraic_residuals,
    ci1_value,
    ci2_value,
    corollary_split_check,
    region_stability,
    region_supremum,
    sample_region_supremum,
    symbol_equiv_sup,
    weight_exponent,
    weight_ratio,
)
from .fields import (
    SobolevIndex,
    SpaceTimeField,
    SpectralField,
    embedding_ratio,
    hs_norm,
    xsb_norm,
    xsb_norm_schrodinger,
)
from .grids import (
    CutoffSpec,
    FrequencyGrid,
    SpaceTimeGrid,
    bracket,
    dft2_forward,
    dft2_inverse,
    dft_forward,
    dft_inverse,
    gamma,
    theta,
    theta_T,
)
from .propagators import (
    InitialData,
    LinearTrajectory,
    linear_solve,
    mode_energy,
    vc_apply,
    vs_apply,
)
from .solver import (
    PicardNonConvergence,
    ReferenceInstability,
    SolutionTrajectory,
    SolverConfig,
    duhamel_apply,
    lipschitz_probe,
    nonlinearity_spectrum,
    picard_solve,
    reference_solve,
    time_localization_exponent,
)

__version__ = "0.1.0"
