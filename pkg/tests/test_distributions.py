import numpy as np
import pytest

from fleximrt.distributions import (
    DistRequest,
    DistributionError,
    noncentral_chisq_cdf,
    noncentral_chisq_quantile,
    noncentral_chisq_sf,
    noncentral_f_cdf,
    noncentral_f_quantile,
    noncentral_f_sf,
)


def test_cdf_zero_at_origin():
    assert noncentral_chisq_cdf(0.0, 4, 3.0) == 0.0
    assert noncentral_f_cdf(0.0, 4, 10, 3.0) == 0.0


def test_central_chisq_table_value():
    # 95th percentile of chi-square(1) is 3.8415
    assert noncentral_chisq_cdf(3.8415, 1, 0.0) == pytest.approx(0.95, abs=1e-4)
    assert noncentral_chisq_quantile(0.95, 1) == pytest.approx(3.8415, abs=1e-3)


def test_zero_noncentrality_reduces_to_central():
    from scipy import stats

    for x in (0.3, 1.7, 4.2, 9.9, 20.0):
        assert noncentral_chisq_cdf(x, 5, 0.0) == pytest.approx(
            stats.chi2.cdf(x, 5), abs=1e-15)
        assert noncentral_f_cdf(x, 3, 17, 0.0) == pytest.approx(
            stats.f.cdf(x, 3, 17), abs=1e-15)


def test_f_cdf_tends_to_one():
    assert noncentral_f_cdf(1e9, 8, 45, 16.0) == pytest.approx(1.0, abs=1e-12)


def test_chisq_sampling_oracle(rng):
    draws = rng.noncentral_chisquare(6, 10.0, size=1_000_000)
    for x in (8.0, 14.0, 22.0):
        assert noncentral_chisq_cdf(x, 6, 10.0) == pytest.approx(
            float((draws <= x).mean()), abs=2e-3)


def test_f_sampling_oracle(rng):
    # ratio-of-chi-square construction, independent of the mixture code
    num = rng.noncentral_chisquare(8, 16.0, size=1_000_000) / 8
    den = rng.chisquare(45, size=1_000_000) / 45
    draws = num / den
    assert noncentral_f_cdf(2.2, 8, 45, 16.0) == pytest.approx(
        float((draws <= 2.2).mean()), abs=2e-3)


def test_f_large_df2_approaches_scaled_chisq():
    q = noncentral_f_quantile(0.95, 3, 1_000_000)
    assert q == pytest.approx(noncentral_chisq_quantile(0.95, 3) / 3.0, abs=1e-3)


def test_quantile_cdf_identity(rng):
    for _ in range(40):
        df = float(rng.integers(1, 30))
        nc = float(rng.uniform(0.0, 40.0))
        p = float(rng.uniform(0.01, 0.99))
        x = noncentral_chisq_quantile(p, df, nc)
        assert noncentral_chisq_cdf(x, df, nc) == pytest.approx(p, abs=1e-8)
        df2 = float(rng.integers(2, 200))
        x = noncentral_f_quantile(p, df, df2, nc)
        assert noncentral_f_cdf(x, df, df2, nc) == pytest.approx(p, abs=1e-8)


def test_cdf_monotone_in_x_and_noncentrality():
    xs = np.linspace(0.1, 30.0, 40)
    values = [noncentral_chisq_cdf(x, 6, 5.0) for x in xs]
    assert all(b >= a for a, b in zip(values, values[1:]))
    assert all(0.0 <= v <= 1.0 for v in values)
    lams = np.linspace(0.0, 30.0, 40)
    at_x = [noncentral_f_cdf(2.0, 4, 30, lam) for lam in lams]
    assert all(b <= a + 1e-12 for a, b in zip(at_x, at_x[1:]))


def test_sf_complements_cdf():
    assert noncentral_chisq_sf(9.0, 6, 10.0) == pytest.approx(
        1.0 - noncentral_chisq_cdf(9.0, 6, 10.0), abs=1e-12)
    assert noncentral_f_sf(2.0, 8, 45, 16.0) == pytest.approx(
        1.0 - noncentral_f_cdf(2.0, 8, 45, 16.0), abs=1e-12)


def test_invalid_parameters_rejected():
    with pytest.raises(DistributionError):
        noncentral_chisq_cdf(1.0, 0.0, 1.0)
    with pytest.raises(DistributionError):
        noncentral_f_cdf(1.0, 3, -1, 1.0)
    with pytest.raises(DistributionError):
        noncentral_chisq_cdf(1.0, 3, -0.5)
    with pytest.raises(DistributionError):
        noncentral_chisq_cdf(1.0, 3, 2e5)
    with pytest.raises(DistributionError):
        noncentral_chisq_quantile(1.5, 3)


def test_request_bundle_dispatches():
    req = DistRequest(family="f", df1=8, df2=45, noncentrality=16.0)
    x = req.quantile(0.9)
    assert req.cdf(x) == pytest.approx(0.9, abs=1e-8)
    assert req.sf(x) == pytest.approx(0.1, abs=1e-8)
    with pytest.raises(DistributionError):
        DistRequest(family="gamma", df1=1)
