"""Heat content of convolution semigroups for concrete bodies.

Library layout:

- ``levy``       Levy measures, symbols, concentration functions, scaling.
- ``geometry``   bodies and covariance functions g(y) = |Omega & (Omega+y)|.
- ``stable``     stable densities (series / Fourier inversion / sampling).
- ``semigroup``  P_t f, generator powers L^k f, compound-Poisson series.
- ``heat``       heat content H(t), nonlocal perimeters.
- ``expansion``  small-time expansion coefficients and limit verification.
- ``cli``        the ``nonlocal-heat`` command-line front end.
"""

from .errors import (
    DomainError,
    IntegrabilityError,
    NumericError,
    ResourceLimitError,
    UnsupportedConfigurationError,
)
from .geometry import (
    Ball,
    Box,
    CovarianceFn,
    DisjointBoxUnion,
    Interval,
    Polygon2D,
    covariance,
    covariance_mc_oracle,
    directional_deriv_at_zero,
    perimeter,
)
from .levy import (
    FiniteAtomic,
    FromMeasureSymbol,
    IsotropicStable,
    LogSymbol,
    OneDimStable,
    RadialDensity,
    SkewedStableSymbol,
    StablePowerSymbol,
    check_wusc,
    concentration_h,
    psi_star,
    scaling_equivalence_check,
    stable_norm_const,
    tail_mass,
    truncated_moment,
)
from .stable import (
    IsotropicStableParams,
    SkewedStableParams,
    coeff_a,
    coeff_b,
    coeff_d,
    density,
    density_fourier,
    density_series_1d,
    density_series_isotropic,
    mean_abs,
    radial_moment_integral,
    sample,
)
from .semigroup import (
    HolderFunction,
    compound_poisson_apply,
    generator_apply,
    generator_power_at,
    holder_from_covariance,
    semigroup_apply_mc,
    taylor_remainder,
)
from .heat import (
    HeatContentRequest,
    alpha_perimeter,
    heat_content_exact_1d,
    heat_content_mc,
    heat_content_quadrature,
    nonlocal_perimeter,
)
from .expansion import (
    ExpansionSeries,
    Term,
    m_omega_diag,
    prop_expansion_1d,
    stable_expansion,
    verify_limit,
)

__version__ = "0.1.0"
