import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gmprod.core import ChainSpec
from gmprod.sampling import SeedSpec, gaussian_matrix, sample_product, sample_single, stream_rng


class TestSeedSpec:
    def test_bounds(self):
        SeedSpec(0, 0)
        SeedSpec(2**64 - 1, 2**64 - 1)
        with pytest.raises(ValueError):
            SeedSpec(-1)
        with pytest.raises(ValueError):
            SeedSpec(0, 2**64)

    def test_stream_offset(self):
        s = SeedSpec(9, 4)
        assert s.stream(3) == SeedSpec(9, 7)


class TestGaussianMatrix:
    def test_deterministic(self):
        a = gaussian_matrix(5, 7, SeedSpec(123, 9))
        b = gaussian_matrix(5, 7, SeedSpec(123, 9))
        assert (a == b).all()

    def test_distinct_streams_differ(self):
        a = gaussian_matrix(5, 7, SeedSpec(123, 0))
        b = gaussian_matrix(5, 7, SeedSpec(123, 1))
        assert not (a == b).all()

    def test_bad_dims_rejected(self):
        with pytest.raises(ValueError):
            gaussian_matrix(0, 3, SeedSpec(0))

    def test_entry_mean(self):
        # CLT: SE of the mean of 10^6 standard normals is 1e-3
        x = gaussian_matrix(1000, 1000, SeedSpec(7))
        assert abs(x.mean()) <= 0.01

    def test_entry_variance(self):
        # Var of the sample variance of n normals ~ 2/n, so SE ~ 1.4e-3
        x = gaussian_matrix(1000, 1000, SeedSpec(7))
        assert abs(x.var(ddof=1) - 1.0) <= 0.02


class TestSampleSingle:
    SPEC = ChainSpec(2, 2, (4,))

    def test_shape(self):
        assert sample_single(self.SPEC, SeedSpec(0)).shape == (2, 2)

    def test_deterministic(self):
        a = sample_single(self.SPEC, SeedSpec(5, 3))
        b = sample_single(self.SPEC, SeedSpec(5, 3))
        assert (a == b).all()

    def test_requires_inner_dimension(self):
        with pytest.raises(ValueError):
            sample_single(ChainSpec(2, 2), SeedSpec(0))

    def test_entry_second_moment(self):
        # E[entry^2] = 1/d1 = 0.25; test the (0,0) entry over 10^5 trials
        # against its own empirical standard error.
        n = 100_000
        seed = SeedSpec(31337)
        sq = np.fromiter(
            (sample_single(self.SPEC, seed.stream(i))[0, 0] ** 2 for i in range(n)),
            dtype=float, count=n,
        )
        se = sq.std(ddof=1) / math.sqrt(n)
        assert abs(sq.mean() - 0.25) <= 3 * se


class TestSampleProduct:
    def test_shape(self):
        out = sample_product(ChainSpec(2, 3, (5, 5)), SeedSpec(0))
        assert out.shape == (2, 3)

    def test_deterministic(self):
        spec = ChainSpec(3, 2, (6,))
        a = sample_product(spec, SeedSpec(11, 2))
        b = sample_product(spec, SeedSpec(11, 2))
        assert (a == b).all()

    def test_scalar_case_is_product_of_two_normals(self):
        # p = q = d1 = 1: both normalizers are 1, so the draw is g1 * g2
        # in factor order from the trial's stream.
        seed = SeedSpec(99, 12)
        rng = stream_rng(seed)
        g1 = rng.standard_normal((1, 1))
        g2 = rng.standard_normal((1, 1))
        out = sample_product(ChainSpec(1, 1, (1,)), seed)
        assert out[0, 0] == g1[0, 0] * g2[0, 0]

    def test_factor_order_and_normalizers(self):
        # reconstruct W1 W2 W3 by hand from the same stream
        spec = ChainSpec(2, 3, (4, 4))
        seed = SeedSpec(17, 5)
        rng = stream_rng(seed)
        g1 = rng.standard_normal((2, 4))
        g2 = rng.standard_normal((4, 4))
        g3 = rng.standard_normal((4, 3))
        expected = (g1 / 2.0) @ (g2 / 2.0) @ (g3 / 2.0)  # last normalizer = 1/sqrt(d1)
        assert np.allclose(sample_product(spec, seed), expected, rtol=1e-15, atol=0)

    def test_structural_violation_rejected(self):
        with pytest.raises(ValueError):
            sample_product(ChainSpec(2, 2, (4, 5)), SeedSpec(0))

    def test_relaxed_validation_keeps_d1_normalizer(self):
        spec = ChainSpec(1, 1, (4, 9))
        seed = SeedSpec(3, 8)
        rng = stream_rng(seed)
        g1 = rng.standard_normal((1, 4))
        g2 = rng.standard_normal((4, 9))
        g3 = rng.standard_normal((9, 1))
        expected = (g1 / 2.0) @ (g2 / 3.0) @ (g3 / 2.0)
        out = sample_product(spec, seed, validate=False)
        assert np.allclose(out, expected, rtol=1e-15, atol=0)

    def test_single_factor_rejected(self):
        with pytest.raises(ValueError):
            sample_product(ChainSpec(2, 2), SeedSpec(0))

    def test_entry_second_moment_matches_single(self):
        # chain normalization makes E[entry^2] = 1/d1 for the product too
        spec = ChainSpec(2, 2, (4,))
        n = 100_000
        seed = SeedSpec(727)
        sq = np.fromiter(
            (sample_product(spec, seed.stream(i))[0, 0] ** 2 for i in range(n)),
            dtype=float, count=n,
        )
        se = sq.std(ddof=1) / math.sqrt(n)
        assert abs(sq.mean() - 0.25) <= 3 * se


@given(st.integers(1, 5), st.integers(1, 5), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_product_shape_property(p, q, d, seed):
    spec = ChainSpec(p, q, (d,))
    assert sample_product(spec, SeedSpec(seed)).shape == (p, q)


def test_stream_independence_cross_correlation():
    # first entries of paired streams (2k, 2k+1) should be uncorrelated:
    # |empirical corr| <= 3/sqrt(n)
    n = 10_000
    xs = np.fromiter(
        (gaussian_matrix(1, 1, SeedSpec(55, 2 * k))[0, 0] for k in range(n)),
        dtype=float, count=n,
    )
    ys = np.fromiter(
        (gaussian_matrix(1, 1, SeedSpec(55, 2 * k + 1))[0, 0] for k in range(n)),
        dtype=float, count=n,
    )
    corr = np.corrcoef(xs, ys)[0, 1]
    assert abs(corr) <= 3 / math.sqrt(n)
