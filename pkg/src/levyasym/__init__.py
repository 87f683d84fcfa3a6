"""Densities, tails, Levy densities and potentials of isotropic unimodal Levy processes.

Everything is computed from the radial Levy-Khintchine exponent by Hankel
inversion, and the package includes harnesses that check the classical
heat-kernel limit theorems numerically.
"""

from .asym import (
    AsymConstant,
    ConvergenceReport,
    bgr_check,
    constant,
    constant_identities,
    density_asym_ratio,
    index_recovery_from_levy,
    levy_ratio,
    limit_probe,
    small_time_ratio,
)
from .catalog import ProcessModel, catalog, load_model_spec, model_from_spec, parse_model_reference
from .density import (
    DensityQuery,
    density,
    density_at,
    density_at_origin,
    origin_karamata_ratio,
    srlt_diagnostics,
    srlt_ratio,
)
from .errors import LevyAsymError
from .exponent import (
    IsotropicExponent,
    LevyDensityProfile,
    RegularVariationEstimate,
    exponent_from_levy_density,
    potter_check,
    psi_inverse,
    psi_star,
    rv_index_estimate,
)
from .potential import green_asym_ratio, green_ball, green_density, laplace_green_ball
from .radial import (
    QuadratureConfig,
    hankel_inverse,
    kernel_k,
    mellin_convolution,
    mellin_k,
    surface_measure,
)
from .tail import TailQuery, laplace_functional, tail, tail_prob, tail_ratio

__version__ = "0.1.0"
