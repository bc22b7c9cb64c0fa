"""Standardized location-scale kernels (normal and smallest extreme value).

A log-location-scale variable ``T`` has ``log T = mu + sigma * Z`` where ``Z``
follows one of the kernels below.  The normal kernel gives the lognormal
distribution and the SEV kernel gives the Weibull distribution.

Two layers are provided.  The ``StandardDistribution`` methods are permissive
and vectorized: they accept arrays and infinite arguments, which the model code
relies on at thresholds and asymptotes.  The module-level ``std_*`` functions
are the strict public API and reject non-finite input.
"""
from __future__ import annotations

import enum

import numpy as np
from scipy import special

from .errors import DomainError

__all__ = [
    "StandardDistribution",
    "std_cdf",
    "std_pdf",
    "std_quantile",
    "parse_distribution",
]

_LOG_SQRT_2PI = 0.5 * np.log(2.0 * np.pi)
_INV_SQRT_2PI = 1.0 / np.sqrt(2.0 * np.pi)


def _exp_half_square(z):
    """``exp(-z**2 / 2)`` without the rounding error of forming ``z**2``.

    ``z`` is split into a short head whose square is exact plus a tail.
    """
    head = np.trunc(z * 16.0) / 16.0
    tail = z - head
    return np.exp(-0.5 * head * head) * np.exp(-0.5 * tail * (z + head))


def _normal_cdf(z):
    # lower tail via the scaled complementary error function
    with np.errstate(over="ignore", invalid="ignore"):
        tail = 0.5 * special.erfcx(-z / np.sqrt(2.0)) * _exp_half_square(z)
    out = np.where(z < -3.0, np.where(np.isneginf(z), 0.0, tail), special.ndtr(z))
    return out if out.ndim else out[()]


class StandardDistribution(enum.Enum):
    """Standardized kernel of a log-location-scale family."""

    NORMAL = "normal"
    SEV = "sev"

    @property
    def log_family(self) -> str:
        """Name of the distribution of ``exp(Z)`` scaled, for display."""
        return "lognormal" if self is StandardDistribution.NORMAL else "weibull"

    def cdf(self, z):
        z = np.asarray(z, dtype=float)
        if self is StandardDistribution.NORMAL:
            return _normal_cdf(z)
        return -np.expm1(-np.exp(z))

    def sf(self, z):
        z = np.asarray(z, dtype=float)
        if self is StandardDistribution.NORMAL:
            return _normal_cdf(-z)
        return np.exp(-np.exp(z))

    def logcdf(self, z):
        z = np.asarray(z, dtype=float)
        if self is StandardDistribution.NORMAL:
            return special.log_ndtr(z)
        with np.errstate(divide="ignore"):
            return np.log(-np.expm1(-np.exp(z)))

    def logsf(self, z):
        z = np.asarray(z, dtype=float)
        if self is StandardDistribution.NORMAL:
            return special.log_ndtr(-z)
        return -np.exp(z)

    def pdf(self, z):
        if self is StandardDistribution.NORMAL:
            z = np.asarray(z, dtype=float)
            with np.errstate(invalid="ignore"):
                out = _INV_SQRT_2PI * _exp_half_square(z)
            out = np.where(np.isinf(z), 0.0, out)
            return out if out.ndim else out[()]
        return np.exp(self.logpdf(z))

    def logpdf(self, z):
        z = np.asarray(z, dtype=float)
        if self is StandardDistribution.NORMAL:
            return -0.5 * z * z - _LOG_SQRT_2PI
        with np.errstate(over="ignore", invalid="ignore"):
            out = z - np.exp(z)
        # z = -inf gives -inf - 0 which is fine; z = +inf gives nan
        return np.where(np.isposinf(z), -np.inf, out)

    def ppf(self, p):
        p = np.asarray(p, dtype=float)
        if self is StandardDistribution.NORMAL:
            return special.ndtri(p)
        with np.errstate(divide="ignore"):
            return np.log(-np.log1p(-p))

    def isf(self, q):
        """Inverse survival function, accurate for small upper-tail ``q``."""
        q = np.asarray(q, dtype=float)
        if self is StandardDistribution.NORMAL:
            return -special.ndtri(q)
        with np.errstate(divide="ignore"):
            return np.log(-np.log(q))


_ALIASES = {
    "normal": StandardDistribution.NORMAL,
    "lognormal": StandardDistribution.NORMAL,
    "sev": StandardDistribution.SEV,
    "weibull": StandardDistribution.SEV,
}


def parse_distribution(tag: str | StandardDistribution) -> StandardDistribution:
    """Resolve a kernel from a tag such as ``"lognormal"`` or ``"weibull"``."""
    if isinstance(tag, StandardDistribution):
        return tag
    try:
        return _ALIASES[str(tag).strip().lower()]
    except KeyError:
        raise ValueError(
            f"unknown distribution {tag!r}; expected one of {sorted(_ALIASES)}"
        ) from None


def _finite(z, name: str):
    arr = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite", bound=None)
    return arr


def _scalar_or_array(value, like):
    return float(value) if np.ndim(like) == 0 else value


def std_cdf(dist: StandardDistribution, z):
    """Standardized cdf ``Phi(z)``."""
    arr = _finite(z, "z")
    return _scalar_or_array(dist.cdf(arr), arr)


def std_pdf(dist: StandardDistribution, z):
    """Standardized density ``phi(z) = dPhi/dz``."""
    arr = _finite(z, "z")
    return _scalar_or_array(dist.pdf(arr), arr)


def std_quantile(dist: StandardDistribution, p):
    """Standardized quantile ``Phi^-1(p)`` for ``0 < p < 1``."""
    arr = np.asarray(p, dtype=float)
    if not np.all((arr > 0.0) & (arr < 1.0)):
        raise DomainError("probability must lie strictly between 0 and 1", bound=None)
    return _scalar_or_array(dist.ppf(arr), arr)
