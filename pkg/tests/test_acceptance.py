"""Acceptance suite: one summary line per criterion, printed at the end of the run."""
import math
import os
import time
import warnings
from pathlib import Path

import numpy as np
import pytest
from scipy import optimize, stats

from helpers import FAMILIES, log_cycle_grid, random_relationship, report
from snmodels.distributions import StandardDistribution
from snmodels.extended import (
    CastilloModel,
    RflModel,
    castillo_quantile,
    castillo_sample,
    rfl_life_cdf,
    rfl_strength_cdf,
)
from snmodels.inference import Query, fit_mle, profile_lr_ci, simulate_dataset
from snmodels.models import (
    ConstantSpread,
    LogLinearSpread,
    ModelSpec,
    atom_probability,
    life_cdf,
    life_quantile,
    log_life_quantile,
    log_strength_quantile,
    sample_life,
    strength_cdf,
)
from snmodels.relationships import Basquin, BoxCox, CoffinManson, Nishijima, RectHyperbola, Stromeyer

NORMAL, SEV = StandardDistribution.NORMAL, StandardDistribution.SEV
PROBS = np.array([0.01, 0.1, 0.5, 0.9, 0.99])
DATA_DIR = Path(__file__).parent / "data"


# -- 1. quantile-curve equivalence ----------------------------------------------

def _round_trip_error(m, logS):
    """Largest |log x_p(t_p(Se)) - log Se| over the probabilities, finite points only."""
    p = PROBS[:, None]
    with np.errstate(all="ignore"):
        logt = log_life_quantile(m, p, np.exp(logS)[None, :])
        # t itself must be a finite normal double; log t can pass 709 near a
        # fatigue limit or fall into the subnormal range at high stress
        t = np.exp(logt)
        ok = np.isfinite(t) & (t >= np.finfo(float).tiny) & (logt > m.rel.vertical if np.isfinite(m.rel.vertical) else True)
        back = np.full(logt.shape, np.nan)
        back[ok] = log_strength_quantile(m, np.broadcast_to(p, logt.shape)[ok], t[ok])
    err = np.abs(back - logS[None, :])[ok]
    return (float(err.max()) if err.size else 0.0), int(ok.sum())


def test_criterion_1_quantile_equivalence():
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst, checked = 0.0, 0
    for family in FAMILIES:
        for dist in (NORMAL, SEV):
            for _ in range(100):
                rel = random_relationship(family, rng)
                sigma = rng.uniform(0.02, 0.5)
                logS = rel.log_h(log_cycle_grid(rel, 20))
                for orient in ("life", "strength"):
                    err, n = _round_trip_error(ModelSpec(orient, rel, dist, ConstantSpread(sigma)), logS)
                    worst, checked = max(worst, err), checked + n
    elapsed = time.perf_counter() - start
    passed = worst < 1e-8 and elapsed < 30.0
    report(1, "quantile-curve equivalence", passed,
           f"max log error {worst:.2e} over {checked} finite points, {elapsed:.1f} s")
    assert worst < 1e-8
    assert elapsed < 30.0


# -- 2. generative oracle ------------------------------------------------------

GENERATIVE = [
    ("life Basquin SEV", ModelSpec("life", Basquin(20.0, -3.0), SEV, ConstantSpread(0.4)), 60.0),
    ("life Stromeyer", ModelSpec("life", Stromeyer(12.0, -2.0, 80.0), NORMAL, ConstantSpread(0.3)), 110.0),
    ("life BoxCox loglinear", ModelSpec("life", BoxCox(8.0, -3.0, -0.5), NORMAL, LogLinearSpread(-1.0, -0.5)), 1.3),
    ("strength Coffin-Manson", ModelSpec("strength", CoffinManson(0.8, 2850.0, -0.0231, -0.905), NORMAL,
                                         ConstantSpread(0.0877)), 0.7),
    ("strength Nishijima SEV", ModelSpec("strength", Nishijima(0.3, 1.0, 0.05, -0.5), SEV,
                                         ConstantSpread(0.1)), math.exp(-0.45)),
    ("strength RectHyperbola", ModelSpec("strength", RectHyperbola(1.0, 2.0, -0.4), NORMAL,
                                         ConstantSpread(0.1)), 1.0),
]


def _sup_distance(m, Se, lives):
    """Kolmogorov distance between the empirical cdf of all units and life_cdf."""
    n = len(lives)
    t = np.sort(lives[np.isfinite(lives)])
    F = life_cdf(m, t, Se)
    i = np.arange(1, len(t) + 1)
    return float(max(np.max(np.abs(F - i / n)), np.max(np.abs(F - (i - 1) / n))))


def test_criterion_2_generative_oracle():
    start = time.perf_counter()
    n = 10**6
    rng = np.random.default_rng(99)
    details, ok = [], True
    for name, m, Se in GENERATIVE:
        lives = sample_life(m, Se, n, rng)
        sup = _sup_distance(m, Se, lives)
        censor_at = float(life_quantile(m, 0.6, Se).value)
        expected = 1.0 - float(life_cdf(m, censor_at, Se))
        observed = float(np.mean(lives > censor_at))
        se = math.sqrt(expected * (1.0 - expected) / n)
        good = sup < 0.005 and abs(observed - expected) < 3.0 * se
        ok &= good
        details.append(f"{name}: sup {sup:.4f}, runouts {observed:.4f} vs {expected:.4f}")
    # the Nishijima case carries an atom, so part of its runout mass never fails
    assert atom_probability(GENERATIVE[4][1], GENERATIVE[4][2]) > 0.1
    elapsed = time.perf_counter() - start
    passed = ok and elapsed < 120.0
    report(2, "generative oracle", passed, "; ".join(details) + f"; {elapsed:.1f} s")
    assert ok, details
    assert elapsed < 120.0


# -- 3. Basquin duality --------------------------------------------------------

@pytest.mark.parametrize("dist", [NORMAL, SEV])
def test_criterion_3_basquin_duality(dist):
    b0, b1, sigma = 25.0, -3.5, 0.35
    m = ModelSpec("life", Basquin(b0, b1), dist, ConstantSpread(sigma))
    rng = np.random.default_rng(7)
    x = np.exp(rng.uniform(0.0, 8.0, 10**4))
    N = np.exp(rng.uniform(2.0, 25.0, 10**4))
    # induced strength is log-location-scale with location b0/|b1| - log N/|b1|
    loc = b0 / abs(b1) - np.log(N) / abs(b1)
    closed = dist.cdf((np.log(x) - loc) / (sigma / abs(b1)))
    general = strength_cdf(m, x, N)
    mask = closed > 1e-300
    rel_err = float(np.max(np.abs(general[mask] - closed[mask]) / closed[mask]))
    passed = rel_err < 1e-12 and np.all(general[~mask] < 1e-290)
    report(3, f"Basquin duality ({dist.name.lower()})", passed, f"max relative error {rel_err:.1e}")
    assert passed


# -- 4. increasing-spread property ---------------------------------------------

def test_criterion_4_increasing_spread():
    rng = np.random.default_rng(11)
    z90 = NORMAL.ppf(0.9)
    checked, failures = 0, []
    for family in ("coffin_manson", "nishijima", "rect_hyperbola"):
        for _ in range(30):
            rel = random_relationship(family, rng)
            sigma = rng.uniform(0.02, 0.3)
            m = ModelSpec("strength", rel, NORMAL, ConstantSpread(sigma))
            logS_curve = rel.log_h(log_cycle_grid(rel, 2))
            lo, hi = logS_curve[1], logS_curve[0]
            if np.isfinite(rel.horizontal):
                # keep t_0.9 finite
                lo = max(lo, rel.horizontal + z90 * sigma + 0.05)
            if not lo < hi:
                continue
            logS = np.linspace(lo, hi, 50)
            Se = np.exp(logS)
            spread = log_life_quantile(m, 0.9, Se) - log_life_quantile(m, 0.1, Se)
            checked += 1
            if not (np.all(np.isfinite(spread)) and np.all(np.diff(spread) < 0.0)):
                failures.append(repr(rel))
    passed = not failures and checked >= 60
    report(4, "increasing spread as stress falls", passed, f"{checked} curves, {len(failures)} violations")
    assert not failures, failures[:3]
    assert checked >= 60


# -- 5. maximum-likelihood recovery --------------------------------------------

CM_TRUTH = {"Ael": 0.8, "Apl": 2850.0, "b": -0.0231, "c": -0.905, "sigma": 0.0877}
CM_SPEC = ModelSpec("strength", CoffinManson(0.8, 2850.0, -0.0231, -0.905), NORMAL, ConstantSpread(0.0877))
CM_DESIGN = [(1.5, 50), (0.9, 50), (0.65, 50), (0.55, 50)]


def test_criterion_5_mle_recovery():
    start = time.perf_counter()
    within, sigma_err, runouts = 0, [], []
    for seed in range(20):
        data = simulate_dataset(CM_SPEC, CM_DESIGN, 3e6, seed=seed)
        runouts.append(1.0 - data.n_failures / len(data))
        fit = fit_mle(data, "coffin_manson", "lognormal", "strength")
        ok = all(abs(fit.natural_params[k] - v) < 3.0 * fit.standard_errors[k] for k, v in CM_TRUTH.items())
        within += ok
        sigma_err.append(abs(fit.natural_params["sigma"] - CM_TRUTH["sigma"]))
    elapsed = time.perf_counter() - start
    mean_err = float(np.mean(sigma_err))
    passed = within >= 18 and mean_err < 0.15 * CM_TRUTH["sigma"] and elapsed < 300.0
    report(5, "Coffin-Manson recovery", passed,
           f"{within}/20 within 3 SE, mean |sigma error| {mean_err:.4f}, "
           f"runouts {np.mean(runouts):.1%}, {elapsed:.0f} s")
    assert within >= 18
    assert mean_err < 0.15 * CM_TRUTH["sigma"]
    assert elapsed < 300.0


# -- 6. profile-likelihood coverage --------------------------------------------

BASQUIN_SPEC = ModelSpec("life", Basquin(30.0, -4.0), NORMAL, ConstantSpread(0.3))
BASQUIN_DESIGN = [(300.0, 13), (250.0, 13), (200.0, 12), (170.0, 12)]


def _censor_for_runout_fraction(spec, design, target):
    n = sum(c for _, c in design)

    def excess(logt):
        surv = sum(c * (1.0 - float(life_cdf(spec, math.exp(logt), s))) for s, c in design)
        return surv / n - target

    return math.exp(optimize.brentq(excess, 0.0, 60.0, xtol=1e-12))


def test_criterion_6_profile_coverage():
    start = time.perf_counter()
    censor_at = _censor_for_runout_fraction(BASQUIN_SPEC, BASQUIN_DESIGN, 0.2)
    low = min(s for s, _ in BASQUIN_DESIGN)
    truth = float(life_quantile(BASQUIN_SPEC, 0.1, low).value)
    query = Query.life_quantile(0.1, low)
    covered, runouts = 0, []
    rng = np.random.default_rng(606)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for _ in range(200):
            data = simulate_dataset(BASQUIN_SPEC, BASQUIN_DESIGN, censor_at, seed=rng)
            runouts.append(1.0 - data.n_failures / len(data))
            fit = fit_mle(data, "basquin", "lognormal", "life")
            covered += profile_lr_ci(fit, query, 0.95).contains(truth)
    elapsed = time.perf_counter() - start
    coverage = covered / 200
    passed = 0.85 <= coverage <= 0.99 and elapsed < 600.0
    report(6, "profile-likelihood coverage", passed,
           f"coverage {coverage:.3f}, runouts {np.mean(runouts):.1%}, {elapsed:.0f} s")
    assert 0.85 <= coverage <= 0.99
    assert elapsed < 600.0


# -- 7. random fatigue-limit limits --------------------------------------------

@pytest.mark.parametrize("dists", [(NORMAL, NORMAL), (SEV, NORMAL), (NORMAL, SEV)])
def test_criterion_7_rfl_limits(dists):
    gamma = 80.0
    rfl = RflModel(12.0, -2.0, 0.3, math.log(gamma), 1e-6, *dists)
    fixed = ModelSpec("life", Stromeyer(12.0, -2.0, gamma), dists[0], ConstantSpread(0.3))
    deg = 0.0
    for Se in (85.0, 100.0, 150.0, 300.0):
        med = float(np.exp(fixed.rel.log_g(math.log(Se))))
        t = med * np.exp(np.linspace(-2.0, 2.0, 41))
        deg = max(deg, float(np.max(np.abs(rfl_life_cdf(rfl, t, Se) - life_cdf(fixed, t, Se)))))
    wide = RflModel(12.0, -2.0, 0.3, math.log(gamma), 0.08, *dists)
    x = np.exp(wide.mu_loggamma + wide.sigma_loggamma * np.linspace(-3.0, 3.0, 61))
    far = float(np.max(np.abs(rfl_strength_cdf(wide, x, 1e30) - wide.gamma_cdf(x))))
    passed = deg < 1e-4 and far < 1e-3
    names = "/".join(d.name.lower() for d in dists)
    report(7, f"random fatigue-limit limits ({names})", passed,
           f"degenerate gap {deg:.1e}, N=1e30 gap {far:.1e}")
    assert deg < 1e-4
    assert far < 1e-3


# -- 8. Castillo closed forms --------------------------------------------------

def test_criterion_8_castillo():
    models = [CastilloModel(B=0.0, E=0.0, gamma=3.0, eta=5.0, beta=2.0),
              CastilloModel(B=1.0, E=-0.5, gamma=2.0, eta=1.5, beta=3.0)]
    p = np.array([0.001, 0.01, 0.1, 0.5, 0.9, 0.99])
    identity, coincide = 0.0, 0.0
    for m in models:
        logS = np.linspace(m.E + 0.1, m.E + 5.0, 40)
        for pi in p:
            t = castillo_quantile(m, pi, np.exp(logS))
            rhs = m.gamma + m.eta * (-math.log1p(-pi)) ** (1.0 / m.beta)
            identity = max(identity, float(np.max(np.abs((np.log(t) - m.B) * (logS - m.E) - rhs))))
            if m is models[0]:
                back = castillo_quantile(m, pi, t, "strength")
                coincide = max(coincide, float(np.max(np.abs(back / np.exp(logS) - 1.0))))
    m = models[0]
    Se = math.exp(1.5)
    lives = castillo_sample(m, Se, 10**5, np.random.default_rng(8))
    loc, scale = m.threshold_and_scale(Se, "life")
    w = ((np.log(lives) - loc) / scale) ** m.beta
    pvalue = float(stats.kstest(w, "expon").pvalue)
    passed = identity < 1e-12 and pvalue > 0.01 and coincide < 1e-10
    report(8, "Castillo closed forms", passed,
           f"identity residual {identity:.1e}, KS p-value {pvalue:.3f}, curve gap {coincide:.1e}")
    assert identity < 1e-12
    assert pvalue > 0.01
    assert coincide < 1e-10


# -- 9. data-dependent checks --------------------------------------------------

def _dataset_path(env, name):
    path = os.environ.get(env)
    if path:
        return Path(path)
    candidate = DATA_DIR / name
    return candidate if candidate.exists() else None


def test_criterion_9_published_data():
    from snmodels.data_io import read_dataset

    nitinol = _dataset_path("SNMODELS_NITINOL_DATA", "nitinol.csv")
    laminate = _dataset_path("SNMODELS_LAMINATE_DATA", "laminate.csv")
    if nitinol is None and laminate is None:
        notice = ("published datasets not supplied; set SNMODELS_NITINOL_DATA or "
                  "SNMODELS_LAMINATE_DATA, or place nitinol.csv / laminate.csv in tests/data")
        report(9, "published-data checks", None, notice)
        pytest.skip(notice)
    details, ok = [], True
    if nitinol is not None:
        fit = fit_mle(read_dataset(nitinol), "coffin_manson", "lognormal", "strength")
        sigma = fit.natural_params["sigma"]
        x10 = Query.strength_quantile(0.1, 6e8).evaluate(fit.spec)
        good = 0.0718 <= sigma <= 0.110 and 0.0794 <= x10 <= 0.128
        ok &= good
        details.append(f"nitinol sigma {sigma:.4f}, x_0.10(6e8) {x10:.4f}")
    if laminate is not None:
        fit = fit_mle(read_dataset(laminate), "boxcox", "lognormal", "life", spread="loglinear")
        lam = fit.natural_params["lam"]
        good = -3.12 <= lam <= -1.23
        ok &= good
        details.append(f"laminate lambda {lam:.3f}")
    report(9, "published-data checks", ok, "; ".join(details))
    assert ok, details
