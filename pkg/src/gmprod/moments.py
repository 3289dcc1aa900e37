"""Exact and asymptotic moments of the statistic for both ensembles.

The six fourth-order invariant moments of a bi-rotationally invariant
ensemble determine the mean of tr((A^T A)^2). Appending one Gaussian
factor maps those moments linearly, which yields both a layer-by-layer
recursion and closed forms for the whole chain. All recursion arithmetic
is generic over Python numbers: integer inputs stay exact (Python ints
never overflow), float inputs run in double precision for large sweeps.

Variances are exact for a single Gaussian factor; for longer chains only
an upper bound is available, computed by a four-term recurrence whose
absolute constants are calibration inputs defaulting to 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction

from .core import ChainSpec


@dataclass(frozen=True)
class MomentVector:
    """Invariant fourth-order moments of one ensemble.

    s1: diagonal entry fourth moment        E A_11^4
    s2: off-diagonal entry fourth moment    E A_21^4
    s3: same-column pair                    E A_11^2 A_21^2
    s4: same-row pair                       E A_11^2 A_12^2
    s5: disjoint pair                       E A_11^2 A_22^2
    s6: rectangle                           E A_11 A_12 A_21 A_22
    """

    s1: int | float
    s2: int | float
    s3: int | float
    s4: int | float
    s5: int | float
    s6: int | float

    def as_tuple(self):
        return (self.s1, self.s2, self.s3, self.s4, self.s5, self.s6)


def base_gaussian_moments() -> MomentVector:
    """Moments of a single unnormalized Gaussian matrix: (3, 3, 1, 1, 1, 0)."""
    return MomentVector(3, 3, 1, 1, 1, 0)


def layer_update(t: MomentVector, d: int) -> MomentVector:
    """Moments of B G for B with moments ``t`` and G a d-column Gaussian.

    The update is linear and keeps s1 == s2 (appending a Gaussian factor
    equalizes diagonal and off-diagonal fourth moments).
    """
    s1 = 3 * d * t.s1 + 3 * d * (d - 1) * t.s4
    s3 = 3 * d * t.s3 + d * (d - 1) * t.s5 + 2 * d * (d - 1) * t.s6
    s4 = d * t.s1 + d * (d - 1) * t.s4
    s5 = d * t.s3 + d * (d - 1) * t.s5
    s6 = d * t.s3 + d * (d - 1) * t.s6
    return MomentVector(s1, s1, s3, s4, s5, s6)


def closed_form_moments(inner) -> MomentVector:
    """Moments of the full unnormalized chain with the given inner dimensions.

    Equivalent to folding ``layer_update`` over ``inner`` starting from the
    single-Gaussian base; an empty list returns the base itself.
    """
    inner = [int(d) for d in inner]
    s4 = math.prod(d * (d + 2) for d in inner)
    s6 = sum(
        math.prod(inner[i] * (inner[i] + 2) for i in range(j))
        * inner[j]
        * math.prod(inner[i] * (inner[i] - 1) for i in range(j + 1, len(inner)))
        for j in range(len(inner))
    )
    return MomentVector(3 * s4, 3 * s4, s4, s4, s4 - 2 * s6, s6)


def mean_h_product_exact(spec: ChainSpec) -> Fraction:
    """Exact E[tr((A^T A)^2)] for the normalized product chain, as a rational.

    The chain normalizer is the fourth power of the accumulated per-factor
    scalings: each of d_1 ... d_{r-1} appears squared, and the last factor
    contributes another d_1^2. With an empty chain (one factor) there is
    no normalizer, so the value is the unnormalized single-Gaussian mean
    p*q*(p+q+1); normalizing that case is the caller's job, mirroring the
    sampler's contract.
    """
    m = closed_form_moments(spec.inner)
    numerator = spec.p * spec.q * (spec.p + spec.q + 1) * m.s3 + spec.p * spec.q * (
        spec.p - 1
    ) * (spec.q - 1) * m.s6
    if not spec.inner:
        return Fraction(numerator)
    denominator = math.prod(d * d for d in spec.inner) * spec.inner[0] ** 2
    return Fraction(numerator, denominator)


def mean_h_product(spec: ChainSpec) -> float:
    """Exact mean of the statistic under the product ensemble, as a float."""
    return float(mean_h_product_exact(spec))


def mean_h_asymptotic(spec: ChainSpec) -> float:
    """Leading-order mean of the statistic for large inner dimensions.

    pq(p+q+1)/d1^2 plus the pq(p-1)(q-1)/d1^2 * sum(1/d_j) correction that
    separates the product from a single Gaussian.
    """
    if spec.r < 2:
        raise ValueError("asymptotic mean needs at least two factors")
    p, q, d1 = spec.p, spec.q, spec.d1
    lead = p * q * (p + q + 1) / d1**2
    corr = p * q * (p - 1) * (q - 1) / d1**2 * sum(1.0 / d for d in spec.inner)
    return lead + corr


def mean_h_single(p: int, q: int, d: int) -> float:
    """Mean of the statistic for a p x q Gaussian scaled by 1/sqrt(d)."""
    return p * q * (p + q + 1) / d**2


@dataclass(frozen=True)
class UComponents:
    """Variance/covariance components of squared Gram entries of one ensemble.

    u1: Var((A^T A)_ii^2)
    u2: Var((A^T A)_ij^2), i != j
    u3: Cov((A^T A)_ii^2, (A^T A)_ik^2), i != k
    u4: Cov((A^T A)_ij^2, (A^T A)_ik^2), j != k, both off-diagonal
    u5: Cov((A^T A)_ii^2, (A^T A)_jj^2), i != j
    u6: Cov((A^T A)_ii^2, (A^T A)_jk^2), i, j, k distinct
    u7: Cov((A^T A)_ij^2, (A^T A)_kl^2), i, j, k, l distinct
    """

    u1: int | float
    u2: int | float
    u3: int | float
    u4: int | float
    u5: int | float
    u6: int | float
    u7: int | float

    def as_tuple(self):
        return (self.u1, self.u2, self.u3, self.u4, self.u5, self.u6, self.u7)


def u_components_gaussian(p: int) -> UComponents:
    """The seven components for an unnormalized Gaussian with p rows."""
    return UComponents(
        u1=8 * p * (p + 2) * (p + 3),
        u2=2 * p * (p + 3),
        u3=4 * p * (p + 2),
        u4=2 * p,
        u5=0,
        u6=0,
        u7=0,
    )


def variance_from_components(u: UComponents, q: int) -> int | float:
    """Assemble Var(tr((A^T A)^2)) from the components, q columns."""
    if q < 1:
        raise ValueError(f"q must be a positive integer, got {q}")
    return (
        q * u.u1
        + q * (q - 1) * (2 * u.u2 + 4 * u.u3 + u.u5)
        + 2 * q * (q - 1) * (q - 2) * (2 * u.u4 + u.u6)
        + q * (q - 1) * (q - 2) * (q - 3) * u.u7
    )


def variance_single_exact(p: int, q: int) -> int:
    """Var(tr((G^T G)^2)) for an unnormalized p x q Gaussian G.

    Callers scale by 1/d^4 for the 1/sqrt(d)-normalized ensemble (the
    statistic is quartic, so its variance picks up the eighth power of the
    scaling).
    """
    return 4 * p * q * (5 + 5 * p + 5 * q + 2 * p * p + 5 * p * q + 2 * q * q)


@dataclass(frozen=True)
class VarianceBoundState:
    """State of the variance-bound recurrence for one chain prefix.

    ``u`` bounds Var of the statistic, ``v`` bounds Var of the squared
    trace, and ``p_term``/``q_term`` are the geometric forcing terms.
    The c1..c4 constants and the kappa base multipliers are unpinned
    absolute constants, configurable and defaulting to 1.
    """

    u: float
    v: float
    p_term: float
    q_term: float
    c1: float = 1.0
    c2: float = 1.0
    c3: float = 1.0
    c4: float = 1.0
    kappa_p: float = 1.0
    kappa_q: float = 1.0

    def __post_init__(self):
        for name in ("u", "v", "p_term", "q_term"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        for name in ("c1", "c2", "c3", "c4", "kappa_p", "kappa_q"):
            if not getattr(self, name) > 0:
                raise ValueError(f"constant {name} must be positive")

    def step(self, d: int) -> "VarianceBoundState":
        """Advance the bound across one appended factor with inner dimension d."""
        cross = math.sqrt(self.u * self.v)
        return replace(
            self,
            u=self.c1 * self.p_term + 2 * self.u + self.v / d**2 + 3 * cross / d,
            v=self.c2 * self.q_term + self.u / d**2 + self.v + 2 * cross / d,
            p_term=self.c3 * self.p_term,
            q_term=self.c4 * self.q_term,
        )


def initial_bound_state(
    spec: ChainSpec,
    c1: float = 1.0,
    c2: float = 1.0,
    c3: float = 1.0,
    c4: float = 1.0,
    kappa_p: float = 1.0,
    kappa_q: float = 1.0,
) -> VarianceBoundState:
    """Base case of the recurrence, at the single-factor prefix.

    The statistic's variance seed is the exact single-Gaussian value
    (available, hence preferred over a loose order bound); the squared
    trace and the forcing terms use their leading-order scales with the
    kappa multipliers.
    """
    if spec.r < 2:
        raise ValueError("variance bound needs at least two factors")
    p, q, d1 = spec.p, spec.q, spec.d1
    norm = d1**4
    return VarianceBoundState(
        u=variance_single_exact(p, q) / norm,
        v=kappa_q * p**3 * q**3 / norm,
        p_term=kappa_p * (p**3 * q + p * q**3) / norm,
        q_term=kappa_q * p**3 * q**3 / norm,
        c1=c1,
        c2=c2,
        c3=c3,
        c4=c4,
        kappa_p=kappa_p,
        kappa_q=kappa_q,
    )


def variance_bound_product(spec: ChainSpec, state0: VarianceBoundState | None = None) -> float:
    """Upper bound on Var of the statistic under the product ensemble.

    Starts from ``state0`` (default: ``initial_bound_state`` with all
    constants 1) and applies one recurrence step per inner dimension, in
    chain order. Returns the final ``u``.
    """
    state = initial_bound_state(spec) if state0 is None else state0
    for d in spec.inner:
        state = state.step(d)
    return state.u
