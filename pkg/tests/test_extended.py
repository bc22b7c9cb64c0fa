import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import stats

from snmodels.distributions import StandardDistribution
from snmodels.errors import DomainError, RangeError
from snmodels.extended import (
    CastilloModel,
    RflModel,
    _rfl_integral,
    castillo_cdf,
    castillo_quantile,
    castillo_sample,
    rfl_life_cdf,
    rfl_life_pdf,
    rfl_quantile,
    rfl_sample_life,
    rfl_sample_strength,
    rfl_strength_cdf,
)
from snmodels.models import ConstantSpread, ModelSpec, life_cdf, life_pdf, life_quantile
from snmodels.relationships import Stromeyer

NORMAL, SEV = StandardDistribution.NORMAL, StandardDistribution.SEV

RFL = RflModel(beta0=12.0, beta1=-2.0, sigma_eps=0.3, mu_loggamma=math.log(80.0), sigma_loggamma=0.08)


def _degenerate(sigma_gamma=1e-6):
    gamma = 80.0
    rfl = RflModel(12.0, -2.0, 0.3, math.log(gamma), sigma_gamma)
    fixed = ModelSpec("life", Stromeyer(12.0, -2.0, gamma), NORMAL, ConstantSpread(0.3))
    return rfl, fixed


def test_degenerate_mixture_is_stromeyer():
    rfl, fixed = _degenerate()
    for Se in (90.0, 120.0, 300.0):
        med = float(np.exp(fixed.rel.log_g(math.log(Se))))
        t = med * np.exp(np.linspace(-1.5, 1.5, 9))
        assert_allclose(rfl_life_cdf(rfl, t, Se), life_cdf(fixed, t, Se), atol=1e-4)
        assert_allclose(rfl_life_pdf(rfl, t, Se), life_pdf(fixed, t, Se),
                        rtol=1e-4, atol=1e-4 * np.max(life_pdf(fixed, t, Se)))
        for p in (0.1, 0.5, 0.9):
            q = rfl_quantile(rfl, p, at_stress=Se)
            assert abs(math.log(q) - math.log(life_quantile(fixed, p, Se).value)) < 1e-4


def test_cdf_vanishes_far_below_limit():
    Se = math.exp(RFL.mu_loggamma - 8.5 * RFL.sigma_loggamma)
    assert np.all(rfl_life_cdf(RFL, np.exp(np.linspace(0, 60, 7)), Se) < 1e-14)


def test_life_cdf_matches_monte_carlo():
    Se = 95.0
    lives = np.sort(rfl_sample_life(RFL, Se, 10**6, np.random.default_rng(1)))
    finite = lives[np.isfinite(lives)]
    # empirical cdf of all units, including those that never fail
    grid = np.exp(np.linspace(math.log(finite[0]), math.log(finite[-1]), 200))
    emp = np.searchsorted(lives, grid, side="right") / len(lives)
    assert np.max(np.abs(emp - rfl_life_cdf(RFL, grid, Se))) < 0.005


def test_strength_cdf_matches_monte_carlo():
    Ne = 1e5
    x = np.sort(rfl_sample_strength(RFL, Ne, 10**6, np.random.default_rng(2)))
    grid = np.exp(np.linspace(math.log(x[100]), math.log(x[-100]), 200))
    emp = np.searchsorted(x, grid, side="right") / len(x)
    assert np.max(np.abs(emp - rfl_strength_cdf(RFL, grid, Ne))) < 0.005


def test_life_pdf_is_cdf_derivative():
    rng = np.random.default_rng(3)
    Se = rng.uniform(85.0, 200.0, 20)
    med = np.exp(RFL.beta0 + RFL.beta1 * np.log(Se - 80.0))
    t = med * np.exp(rng.uniform(-0.5, 0.5, 20))
    h = 1e-5
    fd = (rfl_life_cdf(RFL, t * (1 + h), Se) - rfl_life_cdf(RFL, t * (1 - h), Se)) / (2 * h * t)
    assert_allclose(rfl_life_pdf(RFL, t, Se), fd, rtol=1e-6)


def test_life_pdf_nonnegative():
    t = np.exp(np.linspace(2.0, 20.0, 10))
    S = np.linspace(70.0, 200.0, 10)
    T, SS = np.meshgrid(t, S)
    assert np.all(rfl_life_pdf(RFL, T, SS) >= 0.0)


def test_strength_tends_to_fatigue_limit_distribution():
    x = np.exp(RFL.mu_loggamma + RFL.sigma_loggamma * np.linspace(-2.5, 2.5, 10))
    assert np.max(np.abs(rfl_strength_cdf(RFL, x, 1e30) - RFL.gamma_cdf(x))) < 1e-3


def test_strength_cdf_monotone():
    x = np.linspace(50.0, 400.0, 300)
    assert np.all(np.diff(rfl_strength_cdf(RFL, x, 1e5)) >= 0.0)


@pytest.mark.parametrize("dists", [(NORMAL, NORMAL), (SEV, NORMAL), (NORMAL, SEV), (SEV, SEV)])
def test_node_doubling_is_stable(dists):
    m = RflModel(12.0, -2.0, 0.3, math.log(80.0), 0.08, *dists)
    rng = np.random.default_rng(5)
    Se = rng.uniform(70.0, 200.0, 30)
    logt = np.log(np.exp(12.0) * (Se - 60.0) ** -2.0) + rng.uniform(-1, 1, 30)
    for density in (False, True):
        a = _rfl_integral(m, logt, np.log(Se), density, order=8)
        b = _rfl_integral(m, logt, np.log(Se), density, order=16)
        assert np.max(np.abs(a - b)) < 1e-9 * max(1.0, np.max(np.abs(b)))


def test_quantile_round_trip():
    for p in (0.05, 0.5, 0.9):
        q = rfl_quantile(RFL, p, at_stress=110.0)
        assert abs(rfl_life_cdf(RFL, q, 110.0) - p) < 1e-8
        x = rfl_quantile(RFL, p, at_cycles=1e6)
        assert abs(rfl_strength_cdf(RFL, x, 1e6) - p) < 1e-8


def test_quantile_above_supremum():
    Se = 80.0
    with pytest.raises(RangeError) as err:
        rfl_quantile(RFL, 0.7, at_stress=Se)
    assert_allclose(err.value.limit, 0.5, rtol=1e-12)


def test_rfl_rejects_bad_parameters():
    with pytest.raises(ValueError):
        RflModel(1.0, 0.5, 0.3, 0.0, 0.1)
    with pytest.raises(ValueError):
        RflModel(1.0, -0.5, 0.0, 0.0, 0.1)


def test_rfl_change_units():
    # RFL holds scaled units; the moved model reads values multiplied by the units
    moved = RFL.change_units(10.0, 1e3)
    a = rfl_life_cdf(RFL, 2e5, 100.0)
    assert_allclose(rfl_life_cdf(moved, 2e5 * 1e3, 100.0 * 10.0), a, rtol=1e-9)


# -- Castillo ------------------------------------------------------------------

FIG = CastilloModel(B=0.0, E=0.0, gamma=3.0, eta=5.0, beta=2.0)


def test_castillo_cdf_examples():
    Se = math.exp(2.0)
    t_low = math.exp(3.0 / 2.0)
    assert castillo_cdf(FIG, t_low, Se) == 0.0
    assert castillo_cdf(FIG, t_low * 0.5, Se) == 0.0
    t_unit = math.exp((3.0 + 5.0) / 2.0)
    assert_allclose(castillo_cdf(FIG, t_unit, Se), 1.0 - math.exp(-1.0), rtol=1e-15)
    assert_allclose(castillo_cdf(FIG, t_unit, Se), 0.632121, atol=1e-6)


def test_castillo_median_curve_identity():
    S = np.exp(np.linspace(0.2, 3.0, 20))
    t = castillo_quantile(FIG, 0.5, S)
    assert_allclose(np.log(t) * np.log(S), 3.0 + 5.0 * math.sqrt(math.log(2.0)), rtol=1e-12)


def test_castillo_quantile_round_trip_and_coincidence():
    m = CastilloModel(B=1.0, E=-0.5, gamma=2.0, eta=1.5, beta=3.0)
    for p in (0.01, 0.3, 0.5, 0.99):
        for Se in (1.0, 3.0, 20.0):
            t = castillo_quantile(m, p, Se)
            assert abs(castillo_cdf(m, t, Se) - p) < 1e-10
            assert_allclose(castillo_quantile(m, p, t, "strength"), Se, rtol=1e-10)
            assert abs(castillo_cdf(m, Se, t, "strength") - p) < 1e-10


def test_castillo_small_gamma_hugs_asymptote():
    m = CastilloModel(B=1.0, E=0.0, gamma=1e-6, eta=1e-6, beta=2.0)
    t = castillo_quantile(m, 0.5, math.exp(10.0))
    assert abs(t - math.exp(1.0)) < 1e-3


def test_castillo_domain_error():
    with pytest.raises(DomainError):
        castillo_cdf(FIG, 10.0, 1.0)
    with pytest.raises(DomainError):
        castillo_quantile(FIG, 0.5, 0.5, "strength")


def test_castillo_error_variable_is_unit_exponential():
    Se = math.exp(1.5)
    t = castillo_sample(FIG, Se, 10**5, np.random.default_rng(7))
    loc, scale = FIG.threshold_and_scale(Se, "life")
    w = ((np.log(t) - loc) / scale) ** FIG.beta
    ks = stats.kstest(w, "expon")
    assert ks.statistic < 1.63 / math.sqrt(len(w))


def test_castillo_cdf_monotone_in_each_argument():
    t = np.exp(np.linspace(1.0, 8.0, 200))
    assert np.all(np.diff(castillo_cdf(FIG, t, math.exp(1.2))) >= 0.0)
    S = np.exp(np.linspace(0.5, 4.0, 200))
    assert np.all(np.diff(castillo_cdf(FIG, math.exp(4.0), S)) >= 0.0)
