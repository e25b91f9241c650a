import csv

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats as sps

from blockspec.laws import Semicircle, semicircle_cdf
from blockspec.linalg import hermitize, matrix_power_trace
from blockspec.stats import (
    SpectralSample,
    ecdf,
    empirical_moment,
    esd,
    histogram,
    ks_distance,
    pool,
    write_histogram_csv,
    write_sample_csv,
)


def semicircle_quantiles(u):
    """Inverse of the standard semicircle CDF by bisection (vectorized)."""
    lo = np.full_like(u, -2.0)
    hi = np.full_like(u, 2.0)
    for _ in range(60):
        mid = (lo + hi) / 2
        below = semicircle_cdf(Semicircle(), mid) < u
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return (lo + hi) / 2


class TestSamples:
    def test_esd(self):
        s = esd([3.0, -1.0, 2.0])
        assert s.values.tolist() == [-1.0, 2.0, 3.0]
        assert s.replicate_count == 1 and s.matrix_dim == 3
        with pytest.raises(ValueError):
            esd([])

    def test_pool(self):
        s = pool([np.array([0.0, 2.0]), np.array([1.0, -1.0])])
        assert s.values.tolist() == [-1.0, 0.0, 1.0, 2.0]
        assert (s.replicate_count, s.matrix_dim) == (2, 2)
        with pytest.raises(ValueError):
            pool([np.zeros(2), np.zeros(3)])
        with pytest.raises(ValueError):
            pool([])

    def test_invariants(self):
        with pytest.raises(ValueError):
            SpectralSample(np.array([1.0, 0.0]), 1, 2)
        with pytest.raises(ValueError):
            SpectralSample(np.array([0.0, 1.0]), 2, 2)

    def test_moments(self):
        s = esd([-1.0, 1.0])
        assert empirical_moment(s, 0) == 1.0
        assert empirical_moment(s, 1) == 0.0
        assert empirical_moment(s, 2) == 1.0

    @given(st.integers(1, 12), st.integers(0, 6), st.integers(0, 2**32 - 1))
    @settings(max_examples=30, deadline=None)
    def test_moment_is_normalized_power_trace(self, n, s, seed):
        a = hermitize(np.random.default_rng(seed).normal(size=(n, n)))
        ev = np.linalg.eigvalsh(a)
        assert empirical_moment(esd(ev), s) == pytest.approx(matrix_power_trace(a, s), rel=1e-9, abs=1e-9)

    def test_ecdf(self):
        s = esd([0.0, 1.0, 2.0, 3.0])
        np.testing.assert_allclose(ecdf(s, [-1, 0, 1.5, 3, 9]), [0, 0.25, 0.5, 1, 1])


class TestKS:
    def test_single_point(self):
        assert ks_distance(esd([0.0]), lambda x: semicircle_cdf(Semicircle(), x)) == pytest.approx(0.5)

    @pytest.mark.parametrize("m", [1, 5, 40])
    def test_midpoint_quantiles(self, m):
        # points at the (i - 1/2)/m quantiles sit exactly 1/(2m) from the ECDF steps
        x = semicircle_quantiles((np.arange(1, m + 1) - 0.5) / m)
        d = ks_distance(esd(x), lambda t: semicircle_cdf(Semicircle(), t))
        assert d == pytest.approx(1 / (2 * m), abs=1e-12)

    def test_large_draw(self):
        rng = np.random.default_rng(42)
        x = semicircle_quantiles(rng.uniform(size=100_000))
        d = ks_distance(esd(x), lambda t: semicircle_cdf(Semicircle(), t))
        assert d < 0.01

    @given(st.lists(st.floats(-3, 3, allow_nan=False), min_size=1, max_size=60))
    @settings(max_examples=100, deadline=None)
    def test_matches_scipy(self, values):
        cdf = lambda t: semicircle_cdf(Semicircle(), t)  # noqa: E731
        ours = ks_distance(esd(values), cdf)
        assert ours == pytest.approx(sps.kstest(values, cdf).statistic, abs=1e-12)

    def test_duplicates_collapse(self):
        cdf = lambda t: semicircle_cdf(Semicircle(), t)  # noqa: E731
        x = [-0.5, 0.1, 0.7]
        assert ks_distance(esd(x * 3), cdf) == pytest.approx(ks_distance(esd(x), cdf), abs=1e-15)


class TestHistogram:
    def test_counts(self):
        h = histogram(esd([0.5, 1.5, 1.5, 2.5]), bins=3, range=(0, 3))
        np.testing.assert_allclose(h.densities, [0.25, 0.5, 0.25])
        np.testing.assert_allclose(h.bin_edges, [0, 1, 2, 3])
        assert h.mass == pytest.approx(1.0)

    def test_default_range(self):
        h = histogram(esd([-0.1, 0.2]), bins=6)
        assert (h.bin_edges[0], h.bin_edges[-1]) == (-3.0, 3.0)
        h = histogram(esd([-5.0, 0.2]), bins=6)
        assert (h.bin_edges[0], h.bin_edges[-1]) == (-5.0, 5.0)
        assert h.mass == pytest.approx(1.0)

    def test_centers_and_widths(self):
        h = histogram(esd([0.0]), bins=2, range=(-1, 1))
        np.testing.assert_allclose(h.centers, [-0.5, 0.5])
        np.testing.assert_allclose(h.widths, [1, 1])

    def test_rejects_bad_bins(self):
        with pytest.raises(ValueError):
            histogram(esd([0.0]), bins=0)

    def test_csv(self, tmp_path):
        h = histogram(esd([0.5, 1.5]), bins=2, range=(0, 2))
        path = tmp_path / "h.csv"
        write_histogram_csv(h, path, reference=lambda x: 2 * x)
        rows = list(csv.reader(open(path)))
        assert rows[0] == ["bin_left", "bin_right", "density", "reference_pdf"]
        assert [float(v) for v in rows[1]] == [0.0, 1.0, 0.5, 1.0]
        assert [float(v) for v in rows[2]] == [1.0, 2.0, 0.5, 3.0]
        write_histogram_csv(h, path)
        assert open(path).readline().strip() == "bin_left,bin_right,density"

    def test_sample_csv_round_trip(self, tmp_path):
        s = esd(np.random.default_rng(0).normal(size=7))
        path = tmp_path / "e.csv"
        write_sample_csv(s, path)
        lines = open(path).read().split()
        assert lines[0] == "eigenvalue"
        np.testing.assert_array_equal([float(v) for v in lines[1:]], s.values)
