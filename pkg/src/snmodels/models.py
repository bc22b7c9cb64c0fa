"""Life-specified and strength-specified S-N models and their induced duals.

A life-specified model puts the error on log cycles,

    log N = log g(S) + sigma_N(S) * eps,

and a strength-specified model puts it on log stress,

    log X = log h(N) + sigma_X * eps.

Either one induces a distribution for the other variable through the shared
error term.  Coordinate asymptotes of the curve then show up as thresholds
(a hard lower bound of support) or as an atom of probability at infinity.

The ``*_log_*`` helpers work in log coordinates on arrays and return extended
values (``+inf`` for an infinite quantile, ``-inf`` log density outside the
support).  The unprefixed functions are the strict public API.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import optimize

from .distributions import StandardDistribution, parse_distribution
from .errors import DomainError, RangeError
from .relationships import Relationship

__all__ = [
    "Orientation",
    "ConstantSpread",
    "LogLinearSpread",
    "ModelSpec",
    "QuantileKind",
    "ExtendedQuantile",
    "life_cdf",
    "life_pdf",
    "life_quantile",
    "strength_cdf",
    "strength_pdf",
    "strength_quantile",
    "atom_probability",
    "sigma_at",
    "log_life_quantile",
    "log_strength_quantile",
    "sample_life",
    "sample_strength",
    "monotone_quantile_range",
]


class Orientation(enum.Enum):
    LIFE = "life"
    STRENGTH = "strength"

    @classmethod
    def parse(cls, tag) -> "Orientation":
        if isinstance(tag, cls):
            return tag
        key = str(tag).strip().lower()
        aliases = {"life": cls.LIFE, "life_specified": cls.LIFE, "n": cls.LIFE,
                   "strength": cls.STRENGTH, "strength_specified": cls.STRENGTH, "x": cls.STRENGTH}
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown orientation {tag!r}; expected 'life' or 'strength'") from None


@dataclass(frozen=True)
class ConstantSpread:
    sigma: float

    kind = "constant"

    def __post_init__(self):
        if not (np.isfinite(self.sigma) and self.sigma > 0.0):
            raise ValueError(f"sigma must be positive, got {self.sigma}")

    def log_sigma(self, logS):
        return np.full(np.shape(logS), math.log(self.sigma))

    @property
    def slope(self) -> float:
        return 0.0

    @property
    def params(self) -> dict[str, float]:
        return {"sigma": float(self.sigma)}

    def change_units(self, stress_unit: float) -> "ConstantSpread":
        return self


@dataclass(frozen=True)
class LogLinearSpread:
    """``sigma_N(S) = exp(b0 + b1 log S)``."""

    b0: float
    b1: float

    kind = "loglinear"

    def __post_init__(self):
        if not (np.isfinite(self.b0) and np.isfinite(self.b1)):
            raise ValueError("log-linear spread coefficients must be finite")

    def log_sigma(self, logS):
        return self.b0 + self.b1 * np.asarray(logS, dtype=float)

    @property
    def slope(self) -> float:
        return float(self.b1)

    @property
    def params(self) -> dict[str, float]:
        return {"sigma_b0": float(self.b0), "sigma_b1": float(self.b1)}

    def change_units(self, stress_unit: float) -> "LogLinearSpread":
        return LogLinearSpread(self.b0 - self.b1 * math.log(stress_unit), self.b1)


Spread = Union[ConstantSpread, LogLinearSpread]


@dataclass(frozen=True)
class ModelSpec:
    orientation: Orientation
    rel: Relationship
    dist: StandardDistribution
    spread: Spread

    def __post_init__(self):
        object.__setattr__(self, "orientation", Orientation.parse(self.orientation))
        object.__setattr__(self, "dist", parse_distribution(self.dist))
        if isinstance(self.spread, (int, float)):
            object.__setattr__(self, "spread", ConstantSpread(float(self.spread)))
        if isinstance(self.spread, LogLinearSpread) and self.orientation is Orientation.STRENGTH:
            raise ValueError("log-linear spread is only available for life-specified models")

    @property
    def is_life(self) -> bool:
        return self.orientation is Orientation.LIFE

    def change_units(self, stress_unit: float, cycles_unit: float) -> "ModelSpec":
        return ModelSpec(
            self.orientation,
            self.rel.change_units(stress_unit, cycles_unit),
            self.dist,
            self.spread.change_units(stress_unit),
        )


class QuantileKind(enum.Enum):
    FINITE = "finite"
    INFINITE = "infinite"
    AT_THRESHOLD = "at_threshold"


@dataclass(frozen=True)
class ExtendedQuantile:
    """A quantile that may be infinite because of an atom at infinity.

    ``value`` is the quantile for finite kinds (for ``AT_THRESHOLD`` it is the
    threshold itself).  ``atom`` is the probability that the variable is
    infinite under the model, reported for context.
    """

    kind: QuantileKind
    value: float | None
    atom: float = 0.0

    @property
    def is_finite(self) -> bool:
        return self.kind is not QuantileKind.INFINITE

    def __float__(self) -> float:
        return math.inf if self.value is None else float(self.value)


# -- vectorized kernels in log coordinates ------------------------------------

def _log_sigma(m: ModelSpec, logS):
    return m.spread.log_sigma(logS)


def life_z(m: ModelSpec, logt, logS):
    """Standardized life argument; ``-inf`` below thresholds and fatigue limits."""
    logt = np.asarray(logt, dtype=float)
    logS = np.asarray(logS, dtype=float)
    if m.is_life:
        lg = m.rel.log_g(logS)
        with np.errstate(invalid="ignore"):
            z = (logt - lg) / np.exp(_log_sigma(m, logS))
        return np.where(np.isposinf(lg), -np.inf, z)
    lh = m.rel.log_h(logt)
    z = (logS - lh) / m.spread.sigma
    return np.where(np.isposinf(lh), -np.inf, z)


def life_log_pdf(m: ModelSpec, logt, logS):
    logt = np.asarray(logt, dtype=float)
    logS = np.asarray(logS, dtype=float)
    z = life_z(m, logt, logS)
    if m.is_life:
        out = m.dist.logpdf(z) - logt - _log_sigma(m, logS)
    else:
        with np.errstate(divide="ignore", invalid="ignore"):
            slope = -m.rel.dlogh_dlogN(logt)
            out = m.dist.logpdf(z) + np.log(slope) - logt - math.log(m.spread.sigma)
    return np.where(np.isneginf(z), -np.inf, out)


def strength_z(m: ModelSpec, logx, logN):
    logx = np.asarray(logx, dtype=float)
    logN = np.asarray(logN, dtype=float)
    if m.is_life:
        lg = m.rel.log_g(logx)
        with np.errstate(invalid="ignore"):
            z = (logN - lg) / np.exp(_log_sigma(m, logx))
        return np.where(np.isposinf(lg), -np.inf, z)
    return (logx - m.rel.log_h(logN)) / m.spread.sigma


def strength_log_pdf(m: ModelSpec, logx, logN):
    logx = np.asarray(logx, dtype=float)
    logN = np.asarray(logN, dtype=float)
    z = strength_z(m, logx, logN)
    if not m.is_life:
        return m.dist.logpdf(z) - logx - math.log(m.spread.sigma)
    with np.errstate(invalid="ignore", divide="ignore"):
        # d z / d log x, with sigma_N evaluated at x
        dz = -m.rel.dlogg_dlogS(logx) / np.exp(_log_sigma(m, logx)) - z * m.spread.slope
        out = m.dist.logpdf(z) + np.log(dz) - logx
    return np.where(np.isneginf(z), -np.inf, out)


def log_life_quantile(m: ModelSpec, p, Se):
    """Log life quantile, ``+inf`` where an atom makes ``p`` unattainable."""
    p = np.asarray(p, dtype=float)
    logS = np.log(np.asarray(Se, dtype=float))
    zp = m.dist.ppf(p)
    if m.is_life:
        return m.rel.log_g(logS) + zp * np.exp(_log_sigma(m, logS))
    return m.rel.log_g(logS - zp * m.spread.sigma)


def log_strength_quantile(m: ModelSpec, p, Ne):
    """Log strength quantile, ``+inf`` where an atom makes ``p`` unattainable."""
    p = np.asarray(p, dtype=float)
    logN = np.log(np.asarray(Ne, dtype=float))
    zp = m.dist.ppf(p)
    if not m.is_life:
        return m.rel.log_h(logN) + zp * m.spread.sigma
    if isinstance(m.spread, ConstantSpread):
        return m.rel.log_h(logN - zp * m.spread.sigma)
    p, logN = np.broadcast_arrays(p, logN)
    out = np.array([_loglinear_strength_quantile(m, pi, li) for pi, li in zip(p.ravel(), logN.ravel())])
    return out.reshape(p.shape)


def _loglinear_strength_quantile(m: ModelSpec, p: float, logN: float) -> float:
    # solve Phi((logN - log g(x)) / sigma_N(x)) = p in y = log x
    atom = float(_atom_life_spec(m, logN))
    if p >= 1.0 - atom:
        return math.inf

    def f(y):
        return float(m.dist.cdf(strength_z(m, y, logN))) - p

    e = m.rel.horizontal
    lo = e + 1e-12 * max(1.0, abs(e)) if np.isfinite(e) else -1.0
    step = 1.0
    while f(lo) > 0.0:
        lo -= step
        step *= 2.0
        if step > 1e6:
            raise RangeError("strength quantile not bracketed", kind="above_supremum")
    hi = max(lo + 1.0, 0.0)
    step = 1.0
    while f(hi) < 0.0:
        hi += step
        step *= 2.0
        if step > 1e6:
            return math.inf
    return optimize.brentq(f, lo, hi, xtol=1e-14, rtol=1e-15, maxiter=500)


def _atom_life_spec(m: ModelSpec, logN) -> np.ndarray:
    """Strength atom at infinity of a life-specified model (vertical asymptote)."""
    b = m.rel.vertical
    logN = np.asarray(logN, dtype=float)
    if not np.isfinite(b):
        return np.zeros(np.shape(logN))
    if isinstance(m.spread, ConstantSpread):
        return m.dist.sf((logN - b) / m.spread.sigma)
    # as x grows sigma_N(x) tends to 0 or infinity; take the limiting value
    slope = m.spread.b1
    if slope > 0.0:
        return np.full(np.shape(logN), 1.0 - float(m.dist.cdf(0.0)))
    if slope < 0.0:
        return np.where(logN > b, 0.0, np.where(logN < b, 1.0, 1.0 - float(m.dist.cdf(0.0))))
    return m.dist.sf((logN - b) / math.exp(m.spread.b0))


def _atom_strength_spec(m: ModelSpec, logS) -> np.ndarray:
    """Life atom at infinity of a strength-specified model (horizontal asymptote)."""
    e = m.rel.horizontal
    logS = np.asarray(logS, dtype=float)
    if not np.isfinite(e):
        return np.zeros(np.shape(logS))
    return m.dist.sf((logS - e) / m.spread.sigma)


# -- strict public API ---------------------------------------------------------

def _positive(x, name):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr) & (arr > 0.0)):
        raise DomainError(f"{name} must be positive and finite", bound=0.0)
    return arr


def _prob(p):
    arr = np.asarray(p, dtype=float)
    if not np.all((arr > 0.0) & (arr < 1.0)):
        raise DomainError("probability must lie strictly between 0 and 1", bound=None)
    return arr


def _out(value, *likes):
    value = np.asarray(value, dtype=float)
    return float(value) if all(np.ndim(x) == 0 for x in likes) else value


def _check_life_stress(m: ModelSpec, logS):
    if m.is_life:
        e = m.rel.horizontal
        if np.isfinite(e) and np.any(logS <= e):
            raise DomainError(
                f"stress must exceed the fatigue limit {math.exp(e):.17g} of the life-specified curve",
                bound=math.exp(e),
            )


def _check_strength_cycles(m: ModelSpec, logN):
    if not m.is_life:
        b = m.rel.vertical
        if np.isfinite(b) and np.any(logN <= b):
            raise DomainError(
                f"cycles must exceed the threshold {math.exp(b):.17g} of the strength-specified curve",
                bound=math.exp(b),
            )


def life_cdf(m: ModelSpec, t, Se):
    """Fatigue-life cdf ``P(N <= t)`` at stress ``Se``."""
    t, Se = _positive(t, "cycles"), _positive(Se, "stress")
    logS = np.log(Se)
    _check_life_stress(m, logS)
    return _out(m.dist.cdf(life_z(m, np.log(t), logS)), t, Se)


def life_pdf(m: ModelSpec, t, Se):
    """Fatigue-life density at ``t`` cycles and stress ``Se``."""
    t, Se = _positive(t, "cycles"), _positive(Se, "stress")
    logS = np.log(Se)
    _check_life_stress(m, logS)
    return _out(np.exp(life_log_pdf(m, np.log(t), logS)), t, Se)


def strength_cdf(m: ModelSpec, x, Ne):
    """Fatigue-strength cdf ``P(X <= x)`` at ``Ne`` cycles."""
    x, Ne = _positive(x, "stress"), _positive(Ne, "cycles")
    logN = np.log(Ne)
    _check_strength_cycles(m, logN)
    return _out(m.dist.cdf(strength_z(m, np.log(x), logN)), x, Ne)


def strength_pdf(m: ModelSpec, x, Ne):
    """Fatigue-strength density at stress ``x`` and ``Ne`` cycles."""
    x, Ne = _positive(x, "stress"), _positive(Ne, "cycles")
    logN = np.log(Ne)
    _check_strength_cycles(m, logN)
    return _out(np.exp(strength_log_pdf(m, np.log(x), logN)), x, Ne)


def _extended(logq: float, atom: float, threshold: float) -> ExtendedQuantile:
    if np.isposinf(logq):
        return ExtendedQuantile(QuantileKind.INFINITE, None, atom)
    if np.isfinite(threshold) and logq <= threshold:
        return ExtendedQuantile(QuantileKind.AT_THRESHOLD, math.exp(threshold), atom)
    return ExtendedQuantile(QuantileKind.FINITE, math.exp(logq), atom)


def life_quantile(m: ModelSpec, p: float, Se: float) -> ExtendedQuantile:
    """Life quantile ``t_p(Se)``; ``INFINITE`` when ``p`` is at or above ``1 - atom``."""
    p = float(_prob(p))
    Se = float(_positive(Se, "stress"))
    logS = math.log(Se)
    _check_life_stress(m, logS)
    atom = 0.0 if m.is_life else float(_atom_strength_spec(m, logS))
    logq = float(log_life_quantile(m, p, Se))
    if atom > 0.0 and p >= 1.0 - atom:
        logq = math.inf
    threshold = -math.inf if m.is_life else m.rel.vertical
    return _extended(logq, atom, threshold)


def strength_quantile(m: ModelSpec, p: float, Ne: float) -> ExtendedQuantile:
    """Strength quantile ``x_p(Ne)``; ``INFINITE`` when ``p`` is at or above ``1 - atom``."""
    p = float(_prob(p))
    Ne = float(_positive(Ne, "cycles"))
    logN = math.log(Ne)
    _check_strength_cycles(m, logN)
    atom = float(_atom_life_spec(m, logN)) if m.is_life else 0.0
    logq = float(log_strength_quantile(m, p, Ne))
    if atom > 0.0 and p >= 1.0 - atom:
        logq = math.inf
    threshold = m.rel.horizontal if m.is_life else -math.inf
    return _extended(logq, atom, threshold)


def atom_probability(m: ModelSpec, at):
    """Probability of an infinite value for the induced variable.

    For a strength-specified model ``at`` is a stress and the result is the
    probability of never failing at that stress.  For a life-specified model
    ``at`` is a cycle count and the result is the probability that the
    strength at that life is infinite.
    """
    at = _positive(at, "argument")
    if m.is_life:
        return _out(_atom_life_spec(m, np.log(at)), at)
    return _out(_atom_strength_spec(m, np.log(at)), at)


def sigma_at(m: ModelSpec, S):
    """Spread parameter at stress ``S``."""
    S = _positive(S, "stress")
    return _out(np.exp(_log_sigma(m, np.log(S))), S)


# -- generative samplers ---------------------------------------------------------

def standard_errors(dist: StandardDistribution, size, rng: np.random.Generator):
    """Draw standardized errors from the kernel."""
    if dist is StandardDistribution.NORMAL:
        return rng.standard_normal(size)
    return np.log(rng.standard_exponential(size))


def sample_life(m: ModelSpec, Se: float, size: int, rng: np.random.Generator) -> np.ndarray:
    """Simulate lives at stress ``Se`` by solving the model equation for each error draw.

    Units that never fail (an atom at infinity) are returned as ``inf``.
    """
    logS = math.log(Se)
    eps = standard_errors(m.dist, size, rng)
    if m.is_life:
        _check_life_stress(m, logS)
        sigma = float(np.exp(_log_sigma(m, logS)))
        return np.exp(m.rel.log_g(logS) + sigma * eps)
    with np.errstate(over="ignore"):
        return np.exp(m.rel.log_g(logS - m.spread.sigma * eps))


def sample_strength(m: ModelSpec, Ne: float, size: int, rng: np.random.Generator) -> np.ndarray:
    """Simulate strengths at ``Ne`` cycles; ``inf`` for units that survive any stress."""
    logN = math.log(Ne)
    eps = standard_errors(m.dist, size, rng)
    if not m.is_life:
        _check_strength_cycles(m, logN)
        return np.exp(m.rel.log_h(logN) + m.spread.sigma * eps)
    if not isinstance(m.spread, ConstantSpread):
        raise ValueError("strength sampling for a life-specified model needs constant spread")
    with np.errstate(over="ignore"):
        return np.exp(m.rel.log_h(logN - m.spread.sigma * eps))


def monotone_quantile_range(m: ModelSpec, S_low: float, S_high: float,
                            probs=(0.01, 0.1, 0.5, 0.9, 0.99), n: int = 400):
    """Stress range over which life quantile curves are decreasing and uncrossed.

    Returns ``(lo, hi)`` for the longest contiguous stretch of a log-spaced
    grid on which every quantile curve decreases with stress and the curves
    stay ordered in ``p``, or ``None`` if there is no such stretch.  With
    constant spread this is the whole interval.
    """
    logS = np.linspace(math.log(S_low), math.log(S_high), n)
    q = np.array([log_life_quantile(m, p, np.exp(logS)) for p in sorted(probs)])
    finite = np.all(np.isfinite(q), axis=0)
    ordered = np.all(np.diff(q, axis=0) > 0.0, axis=0) if len(probs) > 1 else np.ones(n, bool)
    ok = finite & ordered
    dec = np.all(np.diff(q, axis=1) < 0.0, axis=0)
    # a point is good if it and the segment to its right are good
    good = ok.copy()
    good[:-1] &= dec & ok[1:]
    best, start, best_span = None, None, 0
    for i, g in enumerate(np.append(good, False)):
        if g and start is None:
            start = i
        elif not g and start is not None:
            if i - start > best_span:
                best_span, best = i - start, (start, i - 1)
            start = None
    if best is None:
        return None
    return float(np.exp(logS[best[0]])), float(np.exp(logS[best[1]]))
