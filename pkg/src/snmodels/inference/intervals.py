"""Wald and profile-likelihood confidence intervals for quantiles and probabilities."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import optimize, stats
from scipy.special import expit, logit

from ..errors import DomainError, FitError, RangeError
from ..extended import RflModel, rfl_life_cdf, rfl_quantile, rfl_strength_cdf
from ..models import life_cdf, life_quantile, strength_cdf, strength_quantile
from .fitting import FittedModel, maximize, numeric_gradient

__all__ = ["Query", "Interval", "wald_ci", "profile_lr_ci"]

# stand-in for an infinite log quantile so root finding stays finite
_BIG = 1e6


@dataclass(frozen=True)
class Query:
    """A scalar function of the fitted model.

    Use the constructors :meth:`life_quantile`, :meth:`strength_quantile`,
    :meth:`life_probability`, :meth:`strength_probability` or :meth:`custom`.
    """

    kind: str
    at: float = math.nan
    p: float = math.nan
    value: float = math.nan
    func: Callable | None = None
    transform: str = "log"

    @classmethod
    def life_quantile(cls, p: float, stress: float) -> "Query":
        return cls("life_quantile", at=float(stress), p=float(p), transform="log")

    @classmethod
    def strength_quantile(cls, p: float, cycles: float) -> "Query":
        return cls("strength_quantile", at=float(cycles), p=float(p), transform="log")

    @classmethod
    def life_probability(cls, cycles: float, stress: float) -> "Query":
        """Probability of failure by ``cycles`` at ``stress``."""
        return cls("life_probability", at=float(stress), value=float(cycles), transform="logit")

    @classmethod
    def strength_probability(cls, stress: float, cycles: float) -> "Query":
        """Probability that strength at ``cycles`` is below ``stress``."""
        return cls("strength_probability", at=float(cycles), value=float(stress), transform="logit")

    @classmethod
    def custom(cls, func: Callable, transform: str = "identity") -> "Query":
        return cls("custom", func=func, transform=transform)

    def evaluate(self, spec) -> float:
        """Value of the target for a model in original units (``inf`` if unbounded)."""
        rfl = isinstance(spec, RflModel)
        if self.kind == "life_quantile":
            if rfl:
                try:
                    return rfl_quantile(spec, self.p, at_stress=self.at)
                except RangeError:
                    return math.inf
            try:
                q = life_quantile(spec, self.p, self.at)
            except DomainError:
                return math.inf
            return q.value if q.is_finite else math.inf
        if self.kind == "strength_quantile":
            if rfl:
                return rfl_quantile(spec, self.p, at_cycles=self.at)
            q = strength_quantile(spec, self.p, self.at)
            return q.value if q.is_finite else math.inf
        if self.kind == "life_probability":
            f = rfl_life_cdf if rfl else life_cdf
            try:
                return float(f(spec, self.value, self.at))
            except DomainError:
                return 0.0
        if self.kind == "strength_probability":
            f = rfl_strength_cdf if rfl else strength_cdf
            return float(f(spec, self.value, self.at))
        if self.kind == "custom":
            return float(self.func(spec))
        raise ValueError(f"unknown query kind {self.kind!r}")

    def forward(self, v: float) -> float:
        if self.transform == "log":
            return math.log(v) if v > 0.0 else -math.inf
        if self.transform == "logit":
            return float(logit(v))
        return v

    def inverse(self, y: float) -> float:
        if self.transform == "log":
            return math.exp(y) if y < 700.0 else math.inf
        if self.transform == "logit":
            return float(expit(y))
        return y

    def describe(self) -> str:
        if self.kind == "life_quantile":
            return f"t_{self.p:g}(S={self.at:g})"
        if self.kind == "strength_quantile":
            return f"x_{self.p:g}(N={self.at:g})"
        if self.kind == "life_probability":
            return f"F_N({self.value:g}; S={self.at:g})"
        if self.kind == "strength_probability":
            return f"F_X({self.value:g}; N={self.at:g})"
        return "custom"


@dataclass(frozen=True)
class Interval:
    """Two-sided confidence interval.

    ``lower_bounded``/``upper_bounded`` are false when the likelihood gives no
    limit on that side; the endpoint is then the edge of the target's range.
    The lower endpoint is also a one-sided lower bound at level
    ``one_sided_level``.
    """

    estimate: float
    lower: float
    upper: float
    level: float
    method: str
    lower_bounded: bool = True
    upper_bounded: bool = True

    @property
    def one_sided_level(self) -> float:
        return 1.0 - (1.0 - self.level) / 2.0

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, v: float) -> bool:
        return self.lower <= v <= self.upper


def _transformed(fit: FittedModel, query: Query):
    def T(theta):
        try:
            v = query.evaluate(fit.spec_at(theta))
        except (ValueError, ArithmeticError):
            return math.nan
        y = query.forward(v)
        if y == math.inf:
            return _BIG
        if y == -math.inf:
            return -_BIG
        return y

    return T


def _edge(query: Query, side: int) -> float:
    if query.transform == "log":
        return 0.0 if side < 0 else math.inf
    if query.transform == "logit":
        return 0.0 if side < 0 else 1.0
    return -math.inf if side < 0 else math.inf


def _estimate(fit: FittedModel, query: Query) -> float:
    v = query.evaluate(fit.spec)
    if v == math.inf and query.kind.endswith("quantile"):
        raise RangeError(f"{query.describe()} is infinite at the estimate: p is above the attainable bound",
                         kind="above_supremum", limit=query.p)
    return v


def wald_ci(fit: FittedModel, query: Query, level: float = 0.95) -> Interval:
    """Delta-method interval on the transformed scale of the target.

    Quantiles use a log transform and probabilities a logit transform, so the
    back-transformed interval respects the target's range.
    """
    if not 0.0 < level < 1.0:
        raise ValueError("level must lie in (0, 1)")
    v = _estimate(fit, query)
    y = query.forward(v)
    if not math.isfinite(y):
        return Interval(v, v, v, level, "wald")
    cov = fit.covariance()
    T = _transformed(fit, query)
    grad = numeric_gradient(T, fit.stable_params)
    if not np.all(np.isfinite(grad)):
        raise FitError("target is not differentiable at the estimate")
    if not np.any(grad):
        return Interval(v, v, v, level, "wald")
    se = math.sqrt(max(float(grad @ cov @ grad), 0.0))
    z = float(stats.norm.ppf(0.5 + level / 2.0))
    lo, hi = query.inverse(y - z * se), query.inverse(y + z * se)
    return Interval(v, min(lo, v), max(hi, v), level, "wald")


def _solve_location(T, theta, idx, target, direction):
    """Value of coordinate ``idx`` at which ``T`` equals ``target``, others fixed."""
    base = theta.copy()

    def h(a):
        base[idx] = a
        return T(base) - target

    a0 = float(theta[idx])
    h0 = h(a0)
    if not math.isfinite(h0):
        return None
    if abs(h0) < 1e-12 * (1.0 + abs(target)):
        return a0
    # secant iterations first; exact in one step for a linear dependence
    a1 = a0 - h0 / direction if direction else a0 + 1e-2
    h1 = h(a1)
    for _ in range(8):
        if not math.isfinite(h1):
            break
        if abs(h1) < 1e-12 * (1.0 + abs(target)):
            return a1
        if h1 == h0:
            break
        a0, a1, h0 = a1, a1 - h1 * (a1 - a0) / (h1 - h0), h1
        h1 = h(a1)
    # fall back on bracketing
    a = float(theta[idx])
    ha = h(a)
    if not math.isfinite(ha):
        return None
    sgn = -np.sign(ha) * np.sign(direction) if direction else 1.0
    step = 0.05
    for _ in range(60):
        b = a + sgn * step
        hb = h(b)
        if not math.isfinite(hb):
            step *= 0.5
            continue
        if np.sign(hb) != np.sign(ha):
            return optimize.brentq(h, min(a, b), max(a, b), xtol=1e-13, rtol=4e-16)
        a, ha = b, hb
        step *= 1.6
    return None


def profile_lr_ci(fit: FittedModel, query: Query, level: float = 0.95,
                  max_steps: int = 40) -> Interval:
    """Likelihood-ratio interval from the profile log-likelihood of the target.

    The constraint ``target = v`` is imposed by solving for the curve's
    location coordinate; the remaining coordinates are maximized.  Each side
    is searched outward from the estimate; if the deviance never reaches the
    chi-square cutoff the side is reported as unbounded.
    """
    if not 0.0 < level < 1.0:
        raise ValueError("level must lie in (0, 1)")
    v_hat = _estimate(fit, query)
    y_hat = query.forward(v_hat)
    if not math.isfinite(y_hat):
        return Interval(v_hat, v_hat, v_hat, level, "profile")
    theta_hat = np.asarray(fit.stable_params, dtype=float)
    T = _transformed(fit, query)
    grad = numeric_gradient(T, theta_hat)
    if not np.any(grad):
        return Interval(v_hat, v_hat, v_hat, level, "profile")
    idx = fit.parameterization.location_index
    direction = float(grad[idx])
    free = [i for i in range(theta_hat.size) if i != idx]
    ll_hat = fit.loglik_at(theta_hat)
    cutoff = float(stats.chi2.ppf(level, 1))

    try:
        cov = fit.covariance()
        se = math.sqrt(max(float(grad @ cov @ grad), 0.0))
    except FitError:
        se = 0.0
    step0 = 0.5 * se if se > 0.0 else 0.05 * (1.0 + abs(y_hat))

    def make_deviance(warm_holder):
        def deviance(y):
            def g(phi):
                full = theta_hat.copy()
                full[free] = phi
                full[idx] = warm_holder["loc"]
                a = _solve_location(T, full, idx, y, direction)
                if a is None:
                    return -1e300
                full[idx] = a
                warm_holder["loc_try"] = a
                return fit.loglik_at(full)

            res = maximize(g, warm_holder["phi"], max_evals=3000, simplex=False, polish=False)
            if res.value <= -1e299:
                return None
            warm_holder["phi"] = res.theta
            warm_holder["loc"] = warm_holder.get("loc_try", warm_holder["loc"])
            return max(2.0 * (ll_hat - res.value), 0.0)
        return deviance

    ends, bounded = [], []
    for side in (-1, 1):
        warm = {"phi": theta_hat[free].copy(), "loc": float(theta_hat[idx])}
        dev = make_deviance(warm)
        prev_y, step = y_hat, step0
        end, found = None, False
        for _ in range(max_steps):
            y = prev_y + side * step
            if abs(y) >= _BIG / 10:
                break
            d = dev(y)
            if d is None:
                break
            if d >= cutoff:
                lo, hi = sorted((prev_y, y))
                try:
                    end = optimize.brentq(lambda u: (dev(u) or 0.0) - cutoff, lo, hi,
                                          xtol=1e-8 * (1.0 + abs(y)))
                except ValueError:
                    end = y
                found = True
                break
            prev_y = y
            step *= 1.6
        ends.append(query.inverse(end) if found else _edge(query, side))
        bounded.append(found)
    lo, hi = ends
    return Interval(v_hat, min(lo, v_hat), max(hi, v_hat), level, "profile",
                    lower_bounded=bounded[0], upper_bounded=bounded[1])
