"""Coordinated two-searcher line search over gap-truncated distributions.

Model a hidden target on an interval whose distribution is truncated by
deleted subintervals on both sides of the origin, compute the expected
elapsed time for two coordinated searchers to detect it, and optimize the
gap mesh points with a damped Newton method.
"""

from .distributions import Cauchy, DistributionSpec, Gamma, Normal, SkewNormal, \
    cdf, center, is_symmetric, pdf, support
from .errors import ConfigurationError, ConvergenceError, DegenerateTruncationError, \
    DomainError, EvaluationError, GapSearchError, LayoutError, NewtonStallError
from .montecarlo import SampleReport, build_report, empirical_cdf_distance, \
    sample, simulate_arrival
from .optimize import NewtonOptions, ObjectivePart, OptimizationResult, \
    PenaltyParams, PenaltyTriple, TraceEntry, fd_gradient, fd_hessian, \
    modified_objective, newton_minimize, optimize_layout
from .search import ExpectedTimeTable, GridResult, SearchSpeeds, TimeRow, \
    baseline_expectation, contour_grid, elapsed_time, expected_time, \
    expected_time_table, row_range
from .special import EvalPolicy, erf, log_gamma, owen_t, \
    regularized_lower_gamma, std_normal_cdf
from .truncation import Gap, Segment, Side, TruncatedDistribution, \
    TruncationClass, TruncationLayout, classify, make_truncated, quantile, \
    segment_probability, truncated_cdf, truncated_pdf

__version__ = "0.1.0"

__all__ = [
    "Cauchy", "ConfigurationError", "ConvergenceError",
    "DegenerateTruncationError", "DistributionSpec", "DomainError",
    "EvalPolicy", "EvaluationError", "ExpectedTimeTable", "Gamma", "Gap",
    "GapSearchError", "GridResult", "LayoutError", "NewtonOptions",
    "NewtonStallError", "Normal", "ObjectivePart", "OptimizationResult",
    "PenaltyParams", "PenaltyTriple", "SampleReport", "SearchSpeeds",
    "Segment", "Side", "SkewNormal", "TimeRow", "TraceEntry",
    "TruncatedDistribution", "TruncationClass", "TruncationLayout",
    "baseline_expectation", "build_report", "cdf", "center", "classify",
    "contour_grid", "elapsed_time", "empirical_cdf_distance", "erf",
    "expected_time", "expected_time_table", "fd_gradient", "fd_hessian",
    "is_symmetric", "log_gamma", "make_truncated", "modified_objective",
    "newton_minimize", "optimize_layout", "owen_t", "pdf", "quantile",
    "regularized_lower_gamma", "row_range", "sample", "segment_probability",
    "simulate_arrival", "std_normal_cdf", "support", "truncated_cdf",
    "truncated_pdf",
]
