"""Ergodic-rate analysis of an energy-splitting surface-assisted two-user
downlink with transceiver hardware impairments.

The package models a planar surface of square cells fed by a point source,
splits the captured energy between a reflected and a refracted user, applies
Nakagami-m small-scale fading with phase alignment, and provides closed-form
ergodic-rate lower bounds, asymptotic limits, Monte Carlo validation, and
power-allocation optimization of the geometric-mean rate.
"""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    DegenerateDistribution,
    DimensionMismatch,
    InvalidAlpha,
    InvalidOrder,
    InvalidShape,
    IosHmimoError,
    NonIntegrableInverseMoment,
    QuadratureNotConverged,
    SicOrderWarning,
)
from .fading import NakagamiMoments, SurfaceSplit, UserLinkParams
from .geometry import ApertureSums, FeedGeometry, SurfaceGeometry, build_grid
from .mc import McConfig, McEstimate, channel_moments_mc, ergodic_rates_mc
from .optimize import OptimizerConfig, OptimumReport, optimize_kappa_noma
from .rates import HardwareQuality, LinkBudget, PowerSplit
from .scenario import Scenario, default_scenario, load_scenario
from .theory import bound_report, rate_lower_bounds

__all__ = [
    "ApertureSums",
    "ConfigError",
    "DegenerateDistribution",
    "DimensionMismatch",
    "FeedGeometry",
    "HardwareQuality",
    "InvalidAlpha",
    "InvalidOrder",
    "InvalidShape",
    "IosHmimoError",
    "LinkBudget",
    "McConfig",
    "McEstimate",
    "NakagamiMoments",
    "NonIntegrableInverseMoment",
    "OptimizerConfig",
    "OptimumReport",
    "PowerSplit",
    "QuadratureNotConverged",
    "Scenario",
    "SicOrderWarning",
    "SurfaceGeometry",
    "SurfaceSplit",
    "UserLinkParams",
    "bound_report",
    "build_grid",
    "channel_moments_mc",
    "default_scenario",
    "ergodic_rates_mc",
    "load_scenario",
    "optimize_kappa_noma",
    "rate_lower_bounds",
    "__version__",
]
