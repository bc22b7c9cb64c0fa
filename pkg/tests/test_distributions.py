import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from snmodels.distributions import StandardDistribution, parse_distribution, std_cdf, std_pdf, std_quantile
from snmodels.errors import DomainError

NORMAL, SEV = StandardDistribution.NORMAL, StandardDistribution.SEV
KINDS = [NORMAL, SEV]


def _mp_normal_cdf(z):
    with mpmath.workdps(50):
        return float(mpmath.ncdf(mpmath.mpf(z)))


def _mp_normal_quantile(p):
    with mpmath.workdps(50):
        return float(mpmath.sqrt(2) * mpmath.erfinv(2 * mpmath.mpf(p) - 1))


def test_cdf_examples():
    assert std_cdf(NORMAL, 0.0) == 0.5
    assert_allclose(std_cdf(SEV, 0.0), 1.0 - math.exp(-1.0), rtol=1e-15)
    assert_allclose(std_cdf(NORMAL, 1.959964), _mp_normal_cdf(1.959964), rtol=1e-14)
    assert_allclose(std_cdf(NORMAL, 1.959964), 0.975, atol=1e-7)


def test_pdf_examples():
    assert_allclose(std_pdf(NORMAL, 0.0), 1.0 / math.sqrt(2.0 * math.pi), rtol=1e-15)
    assert_allclose(std_pdf(SEV, 0.0), math.exp(-1.0), rtol=1e-15)
    h = 1e-5
    fd = (std_cdf(NORMAL, 2.0 + h) - std_cdf(NORMAL, 2.0 - h)) / (2 * h)
    assert abs(std_pdf(NORMAL, 2.0) - fd) < 1e-6


def test_quantile_examples():
    assert std_quantile(NORMAL, 0.5) == 0.0
    assert abs(std_quantile(SEV, 1.0 - math.exp(-1.0))) < 1e-15
    assert_allclose(std_quantile(SEV, 0.5), math.log(math.log(2.0)), rtol=1e-15)
    assert_allclose(std_quantile(SEV, 0.5), -0.366513, atol=1e-6)


@pytest.mark.parametrize("z", [-37.0, -20.0, -8.0, -3.0, 0.3, 4.0, 8.0])
def test_normal_tails_against_mpmath(z):
    assert_allclose(std_cdf(NORMAL, z), _mp_normal_cdf(z), rtol=1e-14)
    assert_allclose(NORMAL.sf(z), _mp_normal_cdf(-z), rtol=1e-14)
    with mpmath.workdps(50):
        assert_allclose(std_pdf(NORMAL, z), float(mpmath.npdf(z)), rtol=1e-14)


@pytest.mark.parametrize("p", [1e-12, 1e-6, 0.001, 0.1, 0.9, 0.999])
def test_quantiles_against_mpmath(p):
    assert_allclose(std_quantile(NORMAL, p), _mp_normal_quantile(p), rtol=1e-14)
    zs = float(mpmath.log(-mpmath.log1p(-mpmath.mpf(p))))
    assert_allclose(std_quantile(SEV, p), zs, rtol=1e-13)


def test_sev_is_accurate_far_out():
    # exp(z) underflows relative to 1 here; the cdf must still be ~exp(z)
    assert_allclose(std_cdf(SEV, -40.0), math.exp(-40.0), rtol=1e-14)
    assert std_cdf(SEV, 4.0) == pytest.approx(1.0 - math.exp(-math.exp(4.0)), rel=1e-15)
    assert_allclose(SEV.logsf(3.0), -math.exp(3.0), rtol=1e-15)


@pytest.mark.parametrize("dist", KINDS)
def test_round_trip_random(dist):
    rng = np.random.default_rng(11)
    p = np.exp(rng.uniform(math.log(1e-6), math.log(1 - 1e-6), 10_000))
    assert np.max(np.abs(std_cdf(dist, std_quantile(dist, p)) - p)) < 1e-10


@pytest.mark.parametrize("dist", KINDS)
def test_pdf_is_derivative(dist):
    z = np.linspace(-6.0, 3.0, 301)
    h = 1e-5
    fd = (std_cdf(dist, z + h) - std_cdf(dist, z - h)) / (2 * h)
    assert np.max(np.abs(std_pdf(dist, z) - fd)) < 1e-6


@pytest.mark.parametrize("dist", KINDS)
def test_cdf_strictly_increasing(dist):
    # beyond z = 3 the SEV cdf is within 1e-9 of one and increments fall below 1 ulp
    z = np.linspace(-8.0, 3.0, 20_001)
    assert np.all(np.diff(std_cdf(dist, z)) > 0.0)


@pytest.mark.parametrize("dist", KINDS)
def test_domain_errors(dist):
    for bad in (math.inf, -math.inf, math.nan):
        with pytest.raises(DomainError):
            std_cdf(dist, bad)
        with pytest.raises(DomainError):
            std_pdf(dist, bad)
    for bad in (0.0, 1.0, -0.1, 1.5, math.nan):
        with pytest.raises(DomainError):
            std_quantile(dist, bad)


def test_aliases():
    assert parse_distribution("lognormal") is NORMAL
    assert parse_distribution("Weibull") is SEV
    assert parse_distribution(SEV) is SEV
    with pytest.raises(ValueError):
        parse_distribution("logistic")


@given(st.floats(min_value=-30, max_value=3.5), st.sampled_from(KINDS))
def test_cdf_plus_sf_is_one(z, dist):
    assert abs(dist.cdf(z) + dist.sf(z) - 1.0) < 1e-15


@given(st.floats(min_value=1e-300, max_value=1 - 1e-16, exclude_max=False), st.sampled_from(KINDS))
def test_isf_mirrors_ppf(p, dist):
    assert_allclose(dist.isf(1.0 - p) if p > 0.5 else dist.ppf(p), dist.ppf(p), rtol=1e-6, atol=1e-12)
