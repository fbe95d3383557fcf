"""Special-function kernel against series/quadrature oracles."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gapsearch import DomainError, EvalPolicy, erf, log_gamma, owen_t, \
    regularized_lower_gamma, std_normal_cdf
from oracles import maclaurin_erf, quad_lower_gamma, quad_owen_t

# frozen with the alternating-series oracle (maclaurin_erf), checked below
ERF_AT_1 = 0.8427007929497148
ERF_AT_2 = 0.9953222650189532


class TestErf:
    def test_zero(self):
        assert erf(0.0) == 0.0

    def test_frozen_series_values(self):
        assert maclaurin_erf(1.0) == pytest.approx(ERF_AT_1, abs=1e-16)
        assert maclaurin_erf(2.0) == pytest.approx(ERF_AT_2, abs=1e-16)
        assert erf(1.0) == pytest.approx(ERF_AT_1, abs=1e-14)
        assert erf(-2.0) == pytest.approx(-ERF_AT_2, abs=1e-14)

    def test_matches_series_oracle_on_grid(self):
        # the alternating series is trustworthy up to ~2.5 before cancellation
        for x in np.linspace(-2.5, 2.5, 41):
            assert erf(float(x)) == pytest.approx(maclaurin_erf(float(x)), abs=1e-14)

    def test_matches_c_library_everywhere(self):
        for x in np.linspace(-6.0, 6.0, 97):
            assert erf(float(x)) == pytest.approx(math.erf(float(x)), abs=1e-14)

    def test_oddness_exact(self):
        rng = np.random.default_rng(42)
        for x in rng.uniform(-6.0, 6.0, size=1000):
            assert erf(-float(x)) == -erf(float(x))

    @given(st.floats(min_value=-6.0, max_value=6.0, allow_nan=False))
    @settings(max_examples=200, deadline=None)
    def test_range_and_oddness(self, x):
        v = erf(x)
        assert -1.0 <= v <= 1.0
        if abs(x) <= 5.8:
            # beyond ~5.86 the true value rounds to exactly 1.0 in doubles,
            # matching math.erf
            assert -1.0 < v < 1.0 or x == 0.0
        assert erf(-x) == -v

    def test_nonfinite_rejected(self):
        for bad in (math.nan, math.inf, -math.inf):
            with pytest.raises(DomainError):
                erf(bad)


class TestStdNormalCdf:
    def test_median(self):
        assert std_normal_cdf(0.0) == 0.5

    def test_quoted_value(self):
        # true value 0.93882687 (erf-series oracle, also mpmath/scipy);
        # the commonly quoted 5-digit rounding is good to ~2e-5 only
        assert std_normal_cdf(1.545) == pytest.approx(0.9388268683164666,
                                                      abs=1e-14)
        assert std_normal_cdf(1.545) == pytest.approx(0.93884, abs=2e-5)

    def test_deep_lower_tail(self):
        # frozen with the complement series F(-4.415) = 0.5*erfc(4.415/sqrt 2)
        assert std_normal_cdf(-4.415) == pytest.approx(5.0504995146054396e-06,
                                                       rel=1e-10)

    def test_complement_exact(self):
        for x in np.linspace(-8.0, 8.0, 81):
            assert std_normal_cdf(float(x)) + std_normal_cdf(-float(x)) == \
                pytest.approx(1.0, abs=1e-14)

    def test_nonfinite_rejected(self):
        with pytest.raises(DomainError):
            std_normal_cdf(math.inf)


class TestOwenT:
    def test_zero_second_argument(self):
        assert owen_t(1.3, 0.0) == 0.0

    def test_arctan_reduction_at_h_zero(self):
        for a in (0.5, 1.0, 2.0, 5.0):
            assert owen_t(0.0, a) == pytest.approx(math.atan(a) / (2 * math.pi),
                                                   abs=1e-12)
        assert owen_t(0.0, 1.0) == pytest.approx(0.125, abs=1e-12)

    def test_frozen_quadrature_value(self):
        frozen = 0.07846818699308411           # quad_owen_t(1, 2)
        assert quad_owen_t(1.0, 2.0) == pytest.approx(frozen, abs=1e-13)
        assert owen_t(1.0, 2.0) == pytest.approx(frozen, abs=1e-12)

    def test_matches_quadrature_oracle_on_grid(self):
        for h in (0.2, 1.0, 2.2, 4.0):
            for a in (0.3, 1.0, 3.37, 5.48):
                assert owen_t(h, a) == pytest.approx(quad_owen_t(h, a), abs=1e-12)

    def test_symmetries_exact(self):
        for h, a in [(0.7, 1.9), (2.0, 0.3), (1.1, 4.0)]:
            assert owen_t(-h, a) == owen_t(h, a)
            assert owen_t(h, -a) == -owen_t(h, a)

    def test_nonfinite_rejected(self):
        with pytest.raises(DomainError):
            owen_t(math.nan, 1.0)
        with pytest.raises(DomainError):
            owen_t(1.0, math.inf)


class TestRegularizedLowerGamma:
    def test_zero(self):
        assert regularized_lower_gamma(2.5, 0.0) == 0.0

    def test_exponential_special_case(self):
        assert regularized_lower_gamma(1.0, 1.0) == pytest.approx(
            1.0 - math.exp(-1.0), abs=1e-14)

    def test_shape_scale_point(self):
        value = regularized_lower_gamma(3.15, 10.0 / 1.27)
        assert 0.0 < value < 1.0
        assert value == pytest.approx(quad_lower_gamma(3.15, 10.0 / 1.27),
                                      abs=1e-12)

    def test_matches_quadrature_oracle_both_branches(self):
        # series branch (x < kappa+1) and continued fraction branch
        for kappa, x in [(3.15, 1.0), (3.15, 12.0), (0.7, 0.3), (0.7, 5.0),
                         (8.0, 4.0), (8.0, 30.0)]:
            assert regularized_lower_gamma(kappa, x) == pytest.approx(
                quad_lower_gamma(kappa, x), abs=1e-12)

    def test_monotone_nondecreasing(self):
        xs = np.linspace(0.0, 30.0, 301)
        vals = [regularized_lower_gamma(3.15, float(x)) for x in xs]
        assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_upper_limit(self):
        for kappa in (0.5, 1.0, 3.15, 10.0):
            x = kappa + 40.0 * math.sqrt(kappa)
            assert regularized_lower_gamma(kappa, x) >= 1.0 - 1e-10

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            regularized_lower_gamma(0.0, 1.0)
        with pytest.raises(DomainError):
            regularized_lower_gamma(2.0, -0.1)


class TestLogGamma:
    def test_factorial_values(self):
        assert log_gamma(5.0) == pytest.approx(math.log(24.0), rel=1e-14)

    def test_domain(self):
        with pytest.raises(DomainError):
            log_gamma(0.0)


class TestEvalPolicy:
    def test_defaults(self):
        policy = EvalPolicy()
        assert policy.abs_tol == 1e-12 and policy.max_terms == 200

    def test_validation(self):
        with pytest.raises(DomainError):
            EvalPolicy(abs_tol=0.0)
        with pytest.raises(DomainError):
            EvalPolicy(max_terms=0)

    def test_policy_accepted_by_ops(self):
        loose = EvalPolicy(abs_tol=1e-8, max_terms=400)
        assert erf(1.0, loose) == pytest.approx(ERF_AT_1, abs=1e-12)
        assert owen_t(1.0, 2.0, loose) == pytest.approx(0.078468186993, abs=1e-7)
