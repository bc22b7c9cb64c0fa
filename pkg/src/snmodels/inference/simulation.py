"""Simulated fatigue datasets with Type I censoring."""
from __future__ import annotations

import numpy as np

from ..extended import CastilloModel, RflModel, castillo_sample, rfl_sample_life
from ..models import ModelSpec, sample_life
from .dataset import Dataset, Observation, Status

__all__ = ["simulate_dataset"]


def simulate_dataset(spec, design, censor_at: float, seed=None,
                     stress_units: str = "", cycles_units: str = "cycles") -> Dataset:
    """Simulate lives for a test plan, censoring at ``censor_at`` cycles.

    Parameters
    ----------
    spec : ModelSpec, RflModel or CastilloModel
        Generating model in the units of ``design`` and ``censor_at``.
    design : sequence of (stress, count)
        Test levels, processed in order.
    censor_at : float
        Units alive at this many cycles (including units that never fail)
        become runouts recorded at ``censor_at``.
    seed : int or numpy Generator, optional

    Returns
    -------
    Dataset
        Deterministic given ``seed``; observations follow the design order.
    """
    if not censor_at > 0.0:
        raise ValueError("censor_at must be positive")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    obs = []
    for stress, count in design:
        stress, count = float(stress), int(count)
        if isinstance(spec, ModelSpec):
            lives = sample_life(spec, stress, count, rng)
        elif isinstance(spec, RflModel):
            lives = rfl_sample_life(spec, stress, count, rng)
        elif isinstance(spec, CastilloModel):
            lives = castillo_sample(spec, stress, count, rng)
        else:
            raise TypeError(f"cannot simulate from {type(spec).__name__}")
        for t in np.asarray(lives, dtype=float):
            if t >= censor_at:
                obs.append(Observation(stress, float(censor_at), Status.RUNOUT))
            else:
                obs.append(Observation(stress, float(t), Status.FAILURE))
    return Dataset(tuple(obs), stress_units, cycles_units)
