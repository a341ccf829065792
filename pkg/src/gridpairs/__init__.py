"""Pair-correlation statistics of fractional powers of complex grid points."""

from .correlations import (
    CorrelationConfig,
    PlanarHistogram,
    RadialHistogram,
    WeightedPointCloud,
    build_full_measure,
    build_level_measure,
    build_measure,
    build_roots_measure,
    bump,
    cross_level_count,
    decompose_pm,
    evaluate,
    planar_histogram,
    prune_radius,
    radial_histogram,
)
from .density import (
    DensityModel,
    RadialPolynomial,
    annulus_mass,
    asymptote,
    bump_polynomial,
    integrate_against,
    integrate_window,
    repulsion_radius,
    rho,
    rho_intro,
    rho_radial,
)
from .grids import (
    HEXAGONAL,
    SQUARE,
    GridSpec,
    GridStats,
    LatticeBasis,
    count_near_line,
    enumerate_disk,
    grid_stats,
    leading_term,
    power_sum,
    reduce_basis,
)
from .powers import (
    LevelPowerParams,
    SectorSpec,
    change_var_h,
    level_power,
    ratio_branch,
    roots,
    sector_classify,
    theta,
)
from .scaling import LimitClass, ScalingRegime, phi_psi

__version__ = "0.1.0"
