"""Random fatigue-limit (RFL) model and the Castillo hyperbolic Weibull model.

RFL
    Each unit has its own fatigue limit ``gamma`` with ``log gamma`` drawn from
    a location-scale distribution.  Given ``gamma < S`` the life follows a
    Stromeyer curve, ``log N = beta0 + beta1 log(S - gamma) + sigma_eps * eps``;
    units with ``gamma >= S`` never fail.  The unconditional cdfs are integrals
    over ``log gamma`` and are evaluated by graded composite Gauss-Legendre
    quadrature in the standardized variable ``u = (log gamma - mu)/sigma``.

Castillo
    ``F = 1 - exp(-(((log t - B)(log S - E) - gamma)/eta)**beta)``, a Weibull
    distribution in either log life or log strength whose quantile curves are
    rectangular hyperbolas shared by both readings.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import optimize

from .distributions import StandardDistribution, parse_distribution
from .errors import DomainError, QuadratureError, RangeError
from .models import Orientation, standard_errors

__all__ = [
    "RflModel",
    "CastilloModel",
    "rfl_life_cdf",
    "rfl_life_pdf",
    "rfl_strength_cdf",
    "rfl_quantile",
    "rfl_sample_life",
    "rfl_sample_strength",
    "castillo_cdf",
    "castillo_quantile",
    "castillo_sample",
]

# standardized integration limits per kernel of log(gamma); the tail mass
# outside each interval is below 1e-15
_TAILS = {
    StandardDistribution.NORMAL: (-8.5, 8.5),
    StandardDistribution.SEV: (-35.0, 3.65),
}


@dataclass(frozen=True)
class RflModel:
    beta0: float
    beta1: float
    sigma_eps: float
    mu_loggamma: float
    sigma_loggamma: float
    dist_life: StandardDistribution = StandardDistribution.NORMAL
    dist_gamma: StandardDistribution = StandardDistribution.NORMAL

    family = "rfl"

    def __post_init__(self):
        object.__setattr__(self, "dist_life", parse_distribution(self.dist_life))
        object.__setattr__(self, "dist_gamma", parse_distribution(self.dist_gamma))
        for name in ("beta0", "beta1", "sigma_eps", "mu_loggamma", "sigma_loggamma"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if not self.beta1 < 0.0:
            raise ValueError("beta1 must be negative")
        if not (self.sigma_eps > 0.0 and self.sigma_loggamma > 0.0):
            raise ValueError("scale parameters must be positive")

    @property
    def params(self) -> dict[str, float]:
        return {
            "beta0": float(self.beta0),
            "beta1": float(self.beta1),
            "sigma_eps": float(self.sigma_eps),
            "mu_loggamma": float(self.mu_loggamma),
            "sigma_loggamma": float(self.sigma_loggamma),
        }

    def change_units(self, stress_unit: float, cycles_unit: float) -> "RflModel":
        a = math.log(stress_unit)
        return RflModel(
            self.beta0 + math.log(cycles_unit) - self.beta1 * a,
            self.beta1,
            self.sigma_eps,
            self.mu_loggamma + a,
            self.sigma_loggamma,
            self.dist_life,
            self.dist_gamma,
        )

    def gamma_cdf(self, x):
        """cdf of the fatigue limit itself."""
        z = (np.log(np.asarray(x, dtype=float)) - self.mu_loggamma) / self.sigma_loggamma
        return self.dist_gamma.cdf(z)


@lru_cache(maxsize=None)
def _gauss_legendre(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w


def _breakpoints(a, b, c, uniform: int, graded: int):
    """Per-row panel edges on ``[a, b]``.

    A uniform mesh handles the smooth fatigue-limit density; geometric meshes
    graded toward the conditional-cdf transition ``c`` (both sides) and toward
    the upper end ``b`` resolve the narrow features.  Clipping keeps the row
    length fixed; collapsed panels have zero width and contribute nothing.
    """
    span = (b - a)[:, None]
    j = np.arange(uniform + 1) / uniform
    pts = [a[:, None] + span * j]
    h = span * 1e-9 * 2.0 ** np.arange(graded)
    pts += [c[:, None] - h, c[:, None] + h, b[:, None] - h, c[:, None]]
    edges = np.concatenate(pts, axis=1)
    edges = np.clip(edges, a[:, None], b[:, None])
    return np.sort(edges, axis=1)


def _rfl_integral(m: RflModel, logt, logS, density: bool, order: int = 8,
                  uniform: int = 48, graded: int = 34):
    logt, logS = np.broadcast_arrays(np.asarray(logt, dtype=float), np.asarray(logS, dtype=float))
    shape = logt.shape
    logt, logS = logt.ravel(), logS.ravel()
    lo_tail, hi_tail = _TAILS[m.dist_gamma]
    mu, sg = m.mu_loggamma, m.sigma_loggamma
    a = np.full(logt.shape, lo_tail)
    b = np.minimum(hi_tail, (logS - mu) / sg)
    empty = b <= a
    b = np.where(empty, a + 1.0, b)
    # stress excess at which the conditional median life equals t
    log_w = (logt - m.beta0) / m.beta1
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        gstar = np.exp(logS) - np.exp(log_w)
        c = np.where(gstar > 0.0, (np.log(gstar) - mu) / sg, a)
    c = np.clip(np.nan_to_num(c, nan=lo_tail), a, b)

    edges = _breakpoints(a, b, c, uniform, graded)
    x, w = _gauss_legendre(order)
    left, width = edges[:, :-1], np.diff(edges, axis=1)
    u = left[:, :, None] + width[:, :, None] * x
    weights = width[:, :, None] * w
    nu = mu + sg * u
    ls = logS[:, None, None]
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        log_excess = ls + np.log1p(-np.exp(np.minimum(nu - ls, 0.0)))
        z = (logt[:, None, None] - m.beta0 - m.beta1 * log_excess) / m.sigma_eps
    z = np.where(np.isnan(z), -np.inf, z)
    if density:
        inner = m.dist_life.pdf(z) / (m.sigma_eps * np.exp(logt[:, None, None]))
    else:
        inner = m.dist_life.cdf(z)
    vals = np.where(weights > 0.0, inner * m.dist_gamma.pdf(u), 0.0)
    out = np.sum(vals * weights, axis=(1, 2))
    out = np.where(empty, 0.0, out)
    if not np.all(np.isfinite(out)):
        raise QuadratureError("non-finite quadrature result", achieved=math.inf)
    return out.reshape(shape)


def _positive(x, name):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr) & (arr > 0.0)):
        raise DomainError(f"{name} must be positive and finite", bound=0.0)
    return arr


def _out(value, *likes):
    return float(value) if all(np.ndim(v) == 0 for v in likes) else value


def rfl_life_cdf(m: RflModel, t, Se, order: int = 8):
    """Unconditional life cdf ``P(N <= t)`` at stress ``Se``."""
    t, Se = _positive(t, "cycles"), _positive(Se, "stress")
    return _out(np.clip(_rfl_integral(m, np.log(t), np.log(Se), False, order), 0.0, 1.0), t, Se)


def rfl_life_pdf(m: RflModel, t, Se, order: int = 8):
    """Unconditional life density at ``t`` cycles and stress ``Se``."""
    t, Se = _positive(t, "cycles"), _positive(Se, "stress")
    return _out(np.maximum(_rfl_integral(m, np.log(t), np.log(Se), True, order), 0.0), t, Se)


def rfl_strength_cdf(m: RflModel, x, Ne, order: int = 8):
    """Strength cdf ``P(X <= x)`` at ``Ne`` cycles.

    This is the life integral with the roles of the arguments exchanged.
    """
    x, Ne = _positive(x, "stress"), _positive(Ne, "cycles")
    return _out(np.clip(_rfl_integral(m, np.log(Ne), np.log(x), False, order), 0.0, 1.0), x, Ne)


def rfl_quantile(m: RflModel, p: float, *, at_stress: float | None = None,
                 at_cycles: float | None = None) -> float:
    """Quantile of life at ``at_stress`` or of strength at ``at_cycles``.

    Raises :class:`RangeError` when ``p`` is not below the supremum of the life
    cdf, which is the probability that the fatigue limit lies below the stress.
    """
    if not 0.0 < p < 1.0:
        raise DomainError("probability must lie strictly between 0 and 1")
    if (at_stress is None) == (at_cycles is None):
        raise ValueError("give exactly one of at_stress or at_cycles")
    if at_stress is not None:
        logS = math.log(float(_positive(at_stress, "stress")))
        sup = float(m.dist_gamma.cdf((logS - m.mu_loggamma) / m.sigma_loggamma))
        if p >= sup:
            raise RangeError(
                f"p={p} is not attainable: the life cdf at this stress never exceeds {sup:.6g}",
                kind="above_supremum",
                limit=sup,
            )

        def f(y):
            return float(_rfl_integral(m, y, logS, False)) - p

        guess = m.beta0 + m.beta1 * logS
    else:
        logN = math.log(float(_positive(at_cycles, "cycles")))

        def f(y):
            return float(_rfl_integral(m, logN, y, False)) - p

        guess = m.mu_loggamma
    lo, hi = guess - 1.0, guess + 1.0
    step = 1.0
    while f(lo) > 0.0:
        lo -= step
        step *= 2.0
        if step > 1e4:
            raise RangeError("quantile bracket search failed", kind="below_asymptote")
    step = 1.0
    while f(hi) < 0.0:
        hi += step
        step *= 2.0
        if step > 1e4:
            raise RangeError("quantile bracket search failed", kind="above_supremum")
    y = optimize.brentq(f, lo, hi, xtol=1e-12, rtol=1e-10, maxiter=300)
    return math.exp(y)


def rfl_sample_life(m: RflModel, Se: float, size: int, rng: np.random.Generator) -> np.ndarray:
    """Two-stage draw: fatigue limit, then life given the limit; ``inf`` if the limit is at or above ``Se``."""
    loggamma = m.mu_loggamma + m.sigma_loggamma * standard_errors(m.dist_gamma, size, rng)
    eps = standard_errors(m.dist_life, size, rng)
    logS = math.log(Se)
    alive = loggamma < logS
    with np.errstate(invalid="ignore", divide="ignore"):
        excess = logS + np.log1p(-np.exp(np.minimum(loggamma - logS, 0.0)))
        logN = m.beta0 + m.beta1 * excess + m.sigma_eps * eps
    return np.where(alive, np.exp(logN), np.inf)


def rfl_sample_strength(m: RflModel, Ne: float, size: int, rng: np.random.Generator) -> np.ndarray:
    """Strength at ``Ne`` cycles: the fatigue limit plus the Stromeyer excess for the unit's error."""
    gamma = np.exp(m.mu_loggamma + m.sigma_loggamma * standard_errors(m.dist_gamma, size, rng))
    eps = standard_errors(m.dist_life, size, rng)
    return gamma + np.exp((math.log(Ne) - m.beta0 - m.sigma_eps * eps) / m.beta1)


# -- Castillo ------------------------------------------------------------------

@dataclass(frozen=True)
class CastilloModel:
    B: float
    E: float
    gamma: float
    eta: float
    beta: float

    family = "castillo"

    def __post_init__(self):
        if not (np.isfinite(self.B) and np.isfinite(self.E)):
            raise ValueError("B and E must be finite")
        if not self.gamma >= 0.0:
            raise ValueError("gamma must be nonnegative")
        if not (self.eta > 0.0 and self.beta > 0.0):
            raise ValueError("eta and beta must be positive")

    @property
    def params(self) -> dict[str, float]:
        return {k: float(getattr(self, k)) for k in ("B", "E", "gamma", "eta", "beta")}

    def threshold_and_scale(self, second, orientation):
        """Weibull threshold and scale of log life (or log strength) at the conditioning value."""
        orientation = Orientation.parse(orientation)
        logv = np.log(_positive(second, "conditioning value"))
        own, other = (self.B, self.E) if orientation is Orientation.LIFE else (self.E, self.B)
        d = logv - other
        if np.any(d <= 0.0):
            name = "stress" if orientation is Orientation.LIFE else "cycles"
            raise DomainError(f"{name} must exceed exp of its asymptote {math.exp(other):.17g}",
                              bound=math.exp(other))
        return own + self.gamma / d, self.eta / d


def castillo_cdf(m: CastilloModel, first, second, orientation="life"):
    """cdf of life at stress ``second`` (life reading) or of strength at ``second`` cycles."""
    first = _positive(first, "argument")
    loc, scale = m.threshold_and_scale(second, orientation)
    w = (np.log(first) - loc) / scale
    with np.errstate(invalid="ignore"):
        out = np.where(w > 0.0, -np.expm1(-np.power(np.maximum(w, 0.0), m.beta)), 0.0)
    return _out(out, first, second)


def castillo_quantile(m: CastilloModel, p, second, orientation="life"):
    """Closed-form quantile ``exp(loc + scale * (-log(1-p))**(1/beta))``."""
    p = np.asarray(p, dtype=float)
    if not np.all((p > 0.0) & (p < 1.0)):
        raise DomainError("probability must lie strictly between 0 and 1")
    loc, scale = m.threshold_and_scale(second, orientation)
    out = np.exp(loc + scale * np.power(-np.log1p(-p), 1.0 / m.beta))
    return _out(out, p, second)


def castillo_sample(m: CastilloModel, second: float, size: int, rng: np.random.Generator,
                    orientation="life") -> np.ndarray:
    """Simulate lives (or strengths) via a smallest-extreme-value error draw."""
    loc, scale = m.threshold_and_scale(second, orientation)
    eps = standard_errors(StandardDistribution.SEV, size, rng)
    return np.exp(loc + scale * np.exp(eps / m.beta))
