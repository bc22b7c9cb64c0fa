"""Censored-data log-likelihood for exact failures and right-censored runouts."""
from __future__ import annotations

import math
import warnings

import numpy as np

from ..errors import DomainError
from ..extended import RflModel, _rfl_integral
from ..models import ModelSpec, life_log_pdf, life_z

__all__ = ["PENALTY", "loglik_terms", "log_likelihood"]

# contribution of a failure the model says is impossible (below a threshold)
PENALTY = -1e10


def loglik_terms(spec, stress, cycles, failed):
    """Per-observation log-likelihood terms and a mask of impossible failures.

    Runouts contribute ``log(1 - F)`` and failures ``log f``.  A failure with
    zero density (at or below a life threshold ``exp(B)``, or at a stress below
    a life-specified fatigue limit) gets :data:`PENALTY` and is flagged.
    """
    logS = np.log(np.asarray(stress, dtype=float))
    logt = np.log(np.asarray(cycles, dtype=float))
    failed = np.asarray(failed, dtype=bool)
    if isinstance(spec, RflModel):
        with np.errstate(divide="ignore"):
            log_f = np.log(_rfl_integral(spec, logt, logS, True))
            log_sf = np.log1p(-np.minimum(_rfl_integral(spec, logt, logS, False), 1.0))
    elif isinstance(spec, ModelSpec):
        log_f = life_log_pdf(spec, logt, logS)
        log_sf = spec.dist.logsf(life_z(spec, logt, logS))
    else:
        raise TypeError(f"no likelihood for {type(spec).__name__}")
    terms = np.where(failed, log_f, log_sf)
    bad = ~np.isfinite(terms)
    terms = np.where(bad, PENALTY, terms)
    return terms, bad


def log_likelihood(spec, data, penalize_domain: bool = False) -> float:
    """Log-likelihood of ``spec`` for a dataset (or a scaled view of one).

    Failures below a modeled life threshold contribute :data:`PENALTY` each.
    With ``penalize_domain`` false, a failure at a stress the life-specified
    curve says can never fail raises :class:`DomainError` naming the index.
    """
    n = len(data)
    if n == 0:
        warnings.warn("empty dataset: log-likelihood is 0", RuntimeWarning, stacklevel=2)
        return 0.0
    if not penalize_domain and isinstance(spec, ModelSpec) and spec.is_life:
        e = spec.rel.horizontal
        if np.isfinite(e):
            hits = np.flatnonzero(np.asarray(data.failed) & (np.log(data.stress) <= e))
            if hits.size:
                i = int(hits[0])
                raise DomainError(
                    f"observation {i} is a failure at stress {data.stress[i]!r}, at or below "
                    f"the fatigue limit {math.exp(e):.17g}",
                    bound=math.exp(e),
                    index=i,
                )
    terms, _ = loglik_terms(spec, data.stress, data.cycles, data.failed)
    return float(np.sum(terms))
