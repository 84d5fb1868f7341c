"""Quantile-based concentration curves and Weibull shape estimation.

The package computes two quantile-ratio concentration curves and their
indices for arbitrary quantile functions, provides closed forms and a range
of shape estimators for the Weibull family (likelihood, moment, L-moment,
regression, percentile, and minimum-distance flavors), the asymptotic
variance of the minimum-distance estimators, a reproducible Monte Carlo
harness comparing estimator accuracy, and an Anderson-Darling bootstrap
goodness-of-fit test.  The ``qcurves`` console script exposes the main
operations.
"""

from ._version import __version__
from .asymptotics import AsymptoticVariance, KernelContext, kernel_R, kernel_ab, md_asymptotic_variance
from .curves import (
    CurveKind,
    CurveSamples,
    QuadratureSpec,
    curve_grid,
    curve_index,
    curve_value,
    gauss_legendre_grid,
)
from .datasets import load_guinea_pigs
from .empirical_qf import (
    EmpiricalQF,
    PlottingPositionQF,
    SortedSample,
    empirical_qf,
    plotting_position_qf,
    plotting_positions,
)
from .errors import (
    BracketFailure,
    DegenerateQuantile,
    DegenerateSample,
    DomainError,
    NoBracket,
    NonConvergence,
    QcurvesError,
    StartFailure,
)
from .gof import GofResult, ad_statistic, ad_test
from .md_estimation import MD_REFERENCES, MdConfig, md_fit, md_objective
from .shape_estimators import (
    BCML_FACTOR,
    EstimateResult,
    SHAPE_METHODS,
    bcml_shape,
    fit_shape,
    gini_shape,
    lmoment_shape,
    ls_shape,
    ml_shape,
    mml_shape,
    moment_shape,
    pe_shape,
    profile_scale,
    tmml_shape,
    wls_shape,
)
from .simulation import (
    ESTIMATOR_ORDER,
    METRICS,
    SimulationConfig,
    SimulationReport,
    render_tables,
    replicate_estimates,
    run_simulation,
)
from .weibull import (
    WeibullParams,
    cdf,
    closed_curve,
    eta_weibull,
    gini_weibull,
    pdf,
    qd_closed,
    quantile,
    quantile_density,
    qz_closed,
    sample,
    weibull_qf,
)

__all__ = [
    "__version__",
    "AsymptoticVariance",
    "KernelContext",
    "kernel_R",
    "kernel_ab",
    "md_asymptotic_variance",
    "CurveKind",
    "CurveSamples",
    "QuadratureSpec",
    "curve_grid",
    "curve_index",
    "curve_value",
    "gauss_legendre_grid",
    "load_guinea_pigs",
    "EmpiricalQF",
    "PlottingPositionQF",
    "SortedSample",
    "empirical_qf",
    "plotting_position_qf",
    "plotting_positions",
    "BracketFailure",
    "DegenerateQuantile",
    "DegenerateSample",
    "DomainError",
    "NoBracket",
    "NonConvergence",
    "QcurvesError",
    "StartFailure",
    "GofResult",
    "ad_statistic",
    "ad_test",
    "MD_REFERENCES",
    "MdConfig",
    "md_fit",
    "md_objective",
    "BCML_FACTOR",
    "EstimateResult",
    "SHAPE_METHODS",
    "bcml_shape",
    "fit_shape",
    "gini_shape",
    "lmoment_shape",
    "ls_shape",
    "ml_shape",
    "mml_shape",
    "moment_shape",
    "pe_shape",
    "profile_scale",
    "tmml_shape",
    "wls_shape",
    "ESTIMATOR_ORDER",
    "METRICS",
    "SimulationConfig",
    "SimulationReport",
    "render_tables",
    "replicate_estimates",
    "run_simulation",
    "WeibullParams",
    "cdf",
    "closed_curve",
    "eta_weibull",
    "gini_weibull",
    "pdf",
    "qd_closed",
    "quantile",
    "quantile_density",
    "qz_closed",
    "sample",
    "weibull_qf",
]
