"""Standardized residuals and fitted values."""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from ..errors import RangeError
from ..extended import RflModel, _rfl_integral, rfl_quantile
from ..models import ExtendedQuantile, ModelSpec, QuantileKind, life_quantile, life_z, strength_quantile

__all__ = ["Residual", "residuals", "fitted_values"]


class Residual(NamedTuple):
    value: float
    censored: bool


def _spec(fit_or_spec):
    return getattr(fit_or_spec, "spec", fit_or_spec)


def residuals(fit, data) -> list[Residual]:
    """Standardized residuals, one per observation, censored for runouts.

    For a life-specified model the residual is ``(log t - log g(S)) / sigma(S)``;
    for a strength-specified model it is ``(log S - log h(t)) / sigma``.  Both
    are the standardized error that would reproduce the observation.  For the
    random fatigue-limit model the residual is the kernel quantile of the
    observation's life cdf.
    """
    spec = _spec(fit)
    logS = np.log(np.asarray(data.stress, dtype=float))
    logt = np.log(np.asarray(data.cycles, dtype=float))
    if isinstance(spec, RflModel):
        F = np.clip(_rfl_integral(spec, logt, logS, False), 0.0, 1.0)
        z = spec.dist_life.ppf(F)
    elif isinstance(spec, ModelSpec):
        with np.errstate(divide="ignore", invalid="ignore"):
            z = life_z(spec, logt, logS)
    else:
        raise TypeError(f"no residuals for {type(spec).__name__}")
    failed = np.asarray(data.failed, dtype=bool)
    return [Residual(float(v), not bool(f)) for v, f in zip(z, failed)]


def fitted_values(fit, *, at_stress: float | None = None, at_cycles: float | None = None) -> ExtendedQuantile:
    """Median life at ``at_stress`` or median strength at ``at_cycles``.

    Returns an :class:`ExtendedQuantile` whose kind is ``INFINITE`` when the
    probability of an infinite value is at least one half.
    """
    if (at_stress is None) == (at_cycles is None):
        raise ValueError("give exactly one of at_stress or at_cycles")
    spec = _spec(fit)
    if isinstance(spec, RflModel):
        try:
            if at_stress is not None:
                v = rfl_quantile(spec, 0.5, at_stress=at_stress)
            else:
                v = rfl_quantile(spec, 0.5, at_cycles=at_cycles)
        except RangeError as err:
            return ExtendedQuantile(QuantileKind.INFINITE, None, 1.0 - float(err.limit))
        return ExtendedQuantile(QuantileKind.FINITE, v, 0.0)
    if at_stress is not None:
        return life_quantile(spec, 0.5, at_stress)
    return strength_quantile(spec, 0.5, at_cycles)


def residual_summary(res: list[Residual]) -> dict[str, float]:
    """Counts, mean and spread of failure residuals, used when comparing fits."""
    vals = np.array([r.value for r in res if not r.censored and math.isfinite(r.value)])
    return {
        "n": len(res),
        "censored": sum(r.censored for r in res),
        "mean": float(vals.mean()) if vals.size else math.nan,
        "sd": float(vals.std(ddof=1)) if vals.size > 1 else math.nan,
        "max_abs": float(np.abs(vals).max()) if vals.size else math.nan,
    }
