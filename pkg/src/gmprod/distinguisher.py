"""Threshold test on the statistic, plus analytic and empirical TV bounds.

The test thresholds the Schatten-4 statistic at the midpoint of the two
analytic means: the midpoint makes the Chebyshev misclassification bound
symmetric between the hypotheses. Total-variation distance is bracketed
from above by the chain bound (and by Pinsker applied to the KL bound for
one factor) and from below by the two-sample Kolmogorov-Smirnov statistic
of the observed statistic values, which is a consistent estimator of a TV
lower bound because pushing both laws through the statistic can only
shrink their distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ChainSpec
from .moments import (
    initial_bound_state,
    mean_h_product,
    mean_h_single,
    variance_bound_product,
    variance_single_exact,
)
from .sampling import SeedSpec, sample_product, sample_single
from .stats import stat_h


@dataclass(frozen=True)
class TestPlan:
    """Precomputed quantities for classifying one statistic value."""

    __test__ = False  # not a pytest class, despite the name

    spec: ChainSpec
    mu_single: float
    mu_product: float
    threshold: float
    var_single: float
    var_product_bound: float


@dataclass(frozen=True)
class PowerReport:
    n_trials: int
    accuracy: float
    false_positive_rate: float
    false_negative_rate: float
    chebyshev_error_bound: float


def build_test(spec: ChainSpec, **constants) -> TestPlan:
    """Test plan for a chain: analytic means, midpoint threshold, variances.

    Keyword ``constants`` (c1..c4, kappa_p, kappa_q) feed the variance
    bound recurrence and default to 1.
    """
    spec.validate()
    if spec.r < 2:
        raise ValueError("test construction needs at least two factors")
    mu_single = mean_h_single(spec.p, spec.q, spec.d1)
    mu_product = mean_h_product(spec)
    return TestPlan(
        spec=spec,
        mu_single=mu_single,
        mu_product=mu_product,
        threshold=(mu_single + mu_product) / 2.0,
        var_single=variance_single_exact(spec.p, spec.q) / spec.d1**4,
        var_product_bound=variance_bound_product(spec, initial_bound_state(spec, **constants)),
    )


def classify(h_value: float, plan: TestPlan) -> str:
    """"product" iff the value exceeds the threshold; exact ties go to "single"."""
    return "product" if h_value > plan.threshold else "single"


def chebyshev_error(plan: TestPlan) -> float:
    """Per-hypothesis misclassification bound for the midpoint threshold.

    Chebyshev at half the mean gap: max variance over (gap/2)^2, clamped
    to 1. A nonpositive gap carries no guarantee and returns 1.
    """
    gap = plan.mu_product - plan.mu_single
    if gap <= 0:
        return 1.0
    worst = max(plan.var_single, plan.var_product_bound)
    return min(1.0, worst / (gap / 2.0) ** 2)


def draw_h_samples(spec: ChainSpec, n: int, seed: SeedSpec) -> tuple[np.ndarray, np.ndarray]:
    """n statistic values from each ensemble.

    Product trial i uses stream ``seed.stream_index + i`` and single trial
    i uses stream ``seed.stream_index + n + i``, so the two batches are
    independent and any trial order reproduces the same values.
    """
    h_product = np.fromiter(
        (stat_h(sample_product(spec, seed.stream(i))) for i in range(n)), dtype=float, count=n
    )
    h_single = np.fromiter(
        (stat_h(sample_single(spec, seed.stream(n + i))) for i in range(n)), dtype=float, count=n
    )
    return h_product, h_single


def empirical_power(
    spec: ChainSpec, n: int, seed: SeedSpec, plan: TestPlan | None = None
) -> PowerReport:
    """Classify n draws from each ensemble and report the error rates.

    A false positive is a single-ensemble draw labeled "product"; a false
    negative is a product draw labeled "single". Accuracy balances the two
    hypotheses equally.
    """
    if n < 10:
        raise ValueError("power estimation needs at least 10 trials per ensemble")
    if plan is None:
        plan = build_test(spec)
    h_product, h_single = draw_h_samples(spec, n, seed)
    fnr = float((h_product <= plan.threshold).mean())
    fpr = float((h_single > plan.threshold).mean())
    return PowerReport(
        n_trials=n,
        accuracy=1.0 - (fpr + fnr) / 2.0,
        false_positive_rate=fpr,
        false_negative_rate=fnr,
        chebyshev_error_bound=chebyshev_error(plan),
    )


def tv_lower_bound_empirical(xs, ys) -> float:
    """Two-sample Kolmogorov-Smirnov statistic: sup_t |F_x(t) - F_y(t)|.

    Thresholding events on the statistic are a subfamily of all events, so
    this estimates a lower bound on the TV distance of the underlying
    matrix laws. Evaluated exactly over all sample points.
    """
    xs = np.sort(np.asarray(xs, dtype=float).ravel())
    ys = np.sort(np.asarray(ys, dtype=float).ravel())
    if xs.size == 0 or ys.size == 0:
        raise ValueError("both samples must be nonempty")
    grid = np.concatenate([xs, ys])
    fx = np.searchsorted(xs, grid, side="right") / xs.size
    fy = np.searchsorted(ys, grid, side="right") / ys.size
    return float(np.abs(fx - fy).max())


def tv_upper_bound(spec: ChainSpec, c: float) -> float:
    """Chain TV upper bound c * sum_i sqrt(pq/d_i), clamped to 1.

    The absolute constant is not pinned by theory; callers choose ``c``
    (conventionally 1) and should report it alongside the value.
    """
    if not c > 0:
        raise ValueError("constant c must be positive")
    if spec.r < 2:
        raise ValueError("upper bound needs at least two factors")
    total = c * sum(math.sqrt(spec.p * spec.q / d) for d in spec.inner)
    return min(1.0, total)


def kl_jiang_ma(p: int, q: int, d: int, c: float) -> float:
    """KL bound c * pq / d between a scaled Gaussian block and an orthogonal block.

    Valid only when both block dimensions are at most d.
    """
    if not c > 0:
        raise ValueError("constant c must be positive")
    if p > d or q > d:
        raise ValueError(f"requires p, q <= d, got p={p}, q={q}, d={d}")
    return c * p * q / d


def pinsker_tv_from_kl(kl: float) -> float:
    """TV upper bound sqrt(kl/2), clamped to 1."""
    if kl < 0:
        raise ValueError("KL divergence must be nonnegative")
    return min(1.0, math.sqrt(kl / 2.0))
