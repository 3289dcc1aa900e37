"""Gaussian matrix product ensembles: sampling, exact moments, distinguishing tests."""

from .core import ChainSpec, Matrix, frobenius_sq, gram, matmul, trace
from .distinguisher import (
    PowerReport,
    TestPlan,
    build_test,
    chebyshev_error,
    classify,
    draw_h_samples,
    empirical_power,
    kl_jiang_ma,
    pinsker_tv_from_kl,
    tv_lower_bound_empirical,
    tv_upper_bound,
)
from .moments import (
    MomentVector,
    UComponents,
    VarianceBoundState,
    base_gaussian_moments,
    closed_form_moments,
    initial_bound_state,
    layer_update,
    mean_h_asymptotic,
    mean_h_product,
    mean_h_product_exact,
    mean_h_single,
    u_components_gaussian,
    variance_bound_product,
    variance_from_components,
    variance_single_exact,
)
from .oracle import (
    CIEstimate,
    OracleBudgetError,
    WickBudget,
    mc_mean,
    mc_variance,
    wick_exact_mean_h,
    wick_exact_var_h_single,
)
from .sampling import SeedSpec, gaussian_matrix, sample_product, sample_single, stream_rng
from .stats import StatSummary, stat_h, stat_t, summarize

__version__ = "0.1.0"

__all__ = [
    "ChainSpec",
    "Matrix",
    "matmul",
    "gram",
    "trace",
    "frobenius_sq",
    "SeedSpec",
    "stream_rng",
    "gaussian_matrix",
    "sample_single",
    "sample_product",
    "stat_h",
    "stat_t",
    "StatSummary",
    "summarize",
    "MomentVector",
    "UComponents",
    "VarianceBoundState",
    "base_gaussian_moments",
    "layer_update",
    "closed_form_moments",
    "mean_h_product",
    "mean_h_product_exact",
    "mean_h_asymptotic",
    "mean_h_single",
    "u_components_gaussian",
    "variance_from_components",
    "variance_single_exact",
    "initial_bound_state",
    "variance_bound_product",
    "WickBudget",
    "CIEstimate",
    "OracleBudgetError",
    "wick_exact_mean_h",
    "wick_exact_var_h_single",
    "mc_mean",
    "mc_variance",
    "TestPlan",
    "PowerReport",
    "build_test",
    "classify",
    "chebyshev_error",
    "empirical_power",
    "draw_h_samples",
    "tv_lower_bound_empirical",
    "tv_upper_bound",
    "kl_jiang_ma",
    "pinsker_tv_from_kl",
    "__version__",
]
