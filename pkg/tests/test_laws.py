import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from blockspec.laws import (
    Semicircle,
    SemicircleMixture,
    circulant_component_variance,
    circulant_component_variance_closed,
    component_variances,
    cos2_sum,
    cos2_sum_direct,
    mixture_cdf,
    mixture_moment,
    mixture_pdf,
    nu_k,
    semicircle_cdf,
    semicircle_moment,
    semicircle_pdf,
    wigner_law,
)


class TestSemicircle:
    def test_pdf_values(self):
        assert semicircle_pdf(Semicircle(), 0.0) == pytest.approx(1 / math.pi)
        assert semicircle_pdf(Semicircle(0, 4), 0.0) == pytest.approx(1 / (2 * math.pi))
        assert semicircle_pdf(Semicircle(), 2.0) == 0.0
        assert semicircle_pdf(Semicircle(), 3.0) == 0.0

    def test_cdf_values(self):
        law = Semicircle()
        assert semicircle_cdf(law, 0.0) == pytest.approx(0.5, abs=1e-15)
        assert semicircle_cdf(law, -2.0) == 0.0
        assert semicircle_cdf(law, 2.0) == 1.0
        assert semicircle_cdf(law, 5.0) == 1.0
        # quadrature oracle
        assert semicircle_cdf(law, 1.0) == pytest.approx(0.8044988905221149, abs=1e-12)
        assert semicircle_cdf(law, 1.0) == pytest.approx(0.80450, abs=1e-5)

    def test_moments(self):
        assert [semicircle_moment(Semicircle(), s) for s in range(7)] == [1, 0, 1, 0, 2, 0, 5]
        assert semicircle_moment(Semicircle(0, 2), 4) == pytest.approx(8.0)

    @pytest.mark.parametrize("center,var", [(0.0, 1.0), (0.7, 0.3), (-1.5, 2.0)])
    def test_against_quadrature(self, center, var):
        law = Semicircle(center, var)
        lo, hi = law.support
        assert quad(lambda x: semicircle_pdf(law, x), lo, hi)[0] == pytest.approx(1.0, abs=1e-10)
        for s in range(1, 7):
            oracle = quad(lambda x: x**s * semicircle_pdf(law, x), lo, hi)[0]
            assert semicircle_moment(law, s) == pytest.approx(oracle, rel=1e-8, abs=1e-10)

    def test_vectorized(self):
        x = np.linspace(-3, 3, 11)
        out = semicircle_pdf(Semicircle(), x)
        assert out.shape == x.shape and np.all(out >= 0)
        assert np.all(np.diff(semicircle_cdf(Semicircle(), x)) >= 0)

    def test_rejects_bad_variance(self):
        with pytest.raises(ValueError):
            Semicircle(0, 0)


class TestNuK:
    def test_k5(self):
        mix = nu_k(5)
        assert mix.weights == pytest.approx((4 / 5, 1 / 5))
        assert mix.variances == pytest.approx((4 / 5, 9 / 5))
        assert mixture_moment(mix, 4) == pytest.approx(2.32, abs=1e-12)

    def test_k4(self):
        mix = nu_k(4)
        assert mix.weights == pytest.approx((0.5, 0.5))
        assert mix.variances == pytest.approx((0.5, 1.5))
        assert mixture_moment(mix, 4) == pytest.approx(2.5, abs=1e-12)

    def test_k2_collapses(self):
        mix = nu_k(2)
        assert len(mix.components) == 1
        assert mix.weights == (1.0,)
        assert mix.variances == (1.0,)

    def test_k3_support(self):
        assert nu_k(3).support == pytest.approx((-2 * math.sqrt(5 / 3), 2 * math.sqrt(5 / 3)))

    def test_rejects_k1(self):
        with pytest.raises(ValueError):
            nu_k(1)

    @pytest.mark.parametrize("k", range(2, 13))
    def test_unit_second_moment(self, k):
        assert mixture_moment(nu_k(k), 2) == pytest.approx(1.0, abs=1e-14)
        assert mixture_moment(nu_k(k), 3) == 0

    @pytest.mark.parametrize("k", [2, 3, 4, 7])
    def test_pdf_integrates_and_cdf_matches(self, k):
        mix = nu_k(k)
        lo, hi = mix.support
        breaks = sorted({-law.radius for _, law in mix.components} | {law.radius for _, law in mix.components})
        assert quad(lambda x: mixture_pdf(mix, x), lo, hi, points=breaks)[0] == pytest.approx(1.0, abs=1e-9)
        x = np.linspace(lo + 0.01, hi - 0.01, 50)
        h = 1e-6
        fd = (mixture_cdf(mix, x + h) - mixture_cdf(mix, x - h)) / (2 * h)
        np.testing.assert_allclose(fd, mixture_pdf(mix, x), atol=1e-5)
        for s in (2, 4, 6):
            oracle = quad(lambda x: x**s * mixture_pdf(mix, x), lo, hi, points=breaks)[0]
            assert mixture_moment(mix, s) == pytest.approx(oracle, rel=1e-8)

    def test_methods_delegate(self):
        mix = nu_k(6)
        assert mix.moment(4) == mixture_moment(mix, 4)
        assert mix.pdf(0.3) == mixture_pdf(mix, 0.3)
        assert mix.cdf(0.3) == mixture_cdf(mix, 0.3)

    def test_mixture_validation(self):
        with pytest.raises(ValueError):
            SemicircleMixture(((0.5, Semicircle()), (0.4, Semicircle())))
        with pytest.raises(ValueError):
            SemicircleMixture(((1.0, Semicircle()), (0.0, Semicircle())))
        with pytest.raises(ValueError):
            SemicircleMixture(())

    def test_wigner_law(self):
        assert wigner_law(2.0).moment(2) == pytest.approx(2.0)
        assert wigner_law().cdf(0.0) == pytest.approx(0.5)


class TestCosineSums:
    def test_examples(self):
        assert cos2_sum(0, 0.3) == pytest.approx(1.0)
        assert cos2_sum(2, 0.0) == pytest.approx(3.0)
        assert cos2_sum(3, math.pi) == pytest.approx(4.0)
        assert cos2_sum(1, math.pi / 2) == pytest.approx(1.0, abs=1e-14)
        # x = 2 pi / 5, N = 2: 1 + cos^2(72 deg) + cos^2(144 deg) = 1 + 0.75
        assert cos2_sum(2, 2 * math.pi / 5) == pytest.approx(1.75, abs=1e-14)

    @given(st.integers(0, 50), st.floats(-20, 20, allow_nan=False))
    @settings(max_examples=200, deadline=None)
    def test_matches_direct(self, N, x):
        assert abs(cos2_sum(N, x) - cos2_sum_direct(N, x)) <= 1e-10 * max(1, N)

    def test_random_cases(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            N = int(rng.integers(0, 51))
            x = float(rng.uniform(-10, 10))
            assert abs(cos2_sum(N, x) - cos2_sum_direct(N, x)) <= 1e-10

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            cos2_sum(-1, 0.1)


class TestComponentVariances:
    def test_examples(self):
        assert circulant_component_variance(5, 1) == pytest.approx(9 / 5)
        assert circulant_component_variance(5, 2) == pytest.approx(4 / 5)
        assert circulant_component_variance(4, 3) == pytest.approx(1.5)
        assert circulant_component_variance(4, 2) == pytest.approx(0.5)
        assert circulant_component_variance(1, 1) == 1.0

    def test_direct_weight_sum(self):
        # oracle: B(j) = k^(-1/2) sum_l cos(2 pi l (j-1) / k) A_{min(l, k-l)}, so the
        # variance is (1/k) * sum over symbols of the squared total weight on that symbol
        for k in range(2, 13):
            for j in range(1, k + 1):
                per_symbol = {}
                for l in range(k):
                    a = min(l, k - l)
                    per_symbol[a] = per_symbol.get(a, 0.0) + math.cos(2 * math.pi * l * (j - 1) / k)
                oracle = sum(v * v for v in per_symbol.values()) / k
                assert circulant_component_variance(k, j) == pytest.approx(oracle, abs=1e-10)

    @pytest.mark.parametrize("k", range(1, 13))
    def test_average_is_one(self, k):
        # the limiting second moment of the whole block matrix is 1
        assert np.mean(component_variances(k)) == pytest.approx(1.0, abs=1e-12)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            circulant_component_variance(4, 5)
