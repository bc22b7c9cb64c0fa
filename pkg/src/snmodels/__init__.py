"""Statistical S-N (stress-life) models for censored fatigue data.

Curve families, log-location-scale life and strength models, the random
fatigue-limit and Castillo models, maximum-likelihood fitting with Wald and
profile-likelihood intervals, and plot-ready data export.
"""
from . import data_io, distributions, extended, inference, models, relationships
from .distributions import StandardDistribution, std_cdf, std_pdf, std_quantile
from .errors import DataError, DomainError, FitError, QuadratureError, RangeError
from .extended import (
    CastilloModel,
    RflModel,
    castillo_cdf,
    castillo_quantile,
    castillo_sample,
    rfl_life_cdf,
    rfl_life_pdf,
    rfl_quantile,
    rfl_strength_cdf,
)
from .inference import (
    Dataset,
    FittedModel,
    Observation,
    Query,
    Status,
    fit_mle,
    fitted_values,
    log_likelihood,
    profile_lr_ci,
    residuals,
    simulate_dataset,
    wald_ci,
)
from .models import (
    ConstantSpread,
    ExtendedQuantile,
    LogLinearSpread,
    ModelSpec,
    Orientation,
    QuantileKind,
    atom_probability,
    life_cdf,
    life_pdf,
    life_quantile,
    strength_cdf,
    strength_pdf,
    strength_quantile,
)
from .relationships import (
    Basquin,
    BoxCox,
    CoffinManson,
    ModifiedBastenaire,
    Nishijima,
    RectHyperbola,
    Stromeyer,
    asymptotes,
    eval_log_g,
    eval_log_h,
    invert_h,
)

__version__ = "0.1.0"

__all__ = [
    "asymptotes",
    "atom_probability",
    "Basquin",
    "BoxCox",
    "castillo_cdf",
    "castillo_quantile",
    "castillo_sample",
    "CastilloModel",
    "CoffinManson",
    "ConstantSpread",
    "data_io",
    "DataError",
    "Dataset",
    "distributions",
    "DomainError",
    "eval_log_g",
    "eval_log_h",
    "extended",
    "ExtendedQuantile",
    "fit_mle",
    "FitError",
    "fitted_values",
    "FittedModel",
    "inference",
    "invert_h",
    "life_cdf",
    "life_pdf",
    "life_quantile",
    "log_likelihood",
    "LogLinearSpread",
    "models",
    "ModelSpec",
    "ModifiedBastenaire",
    "Nishijima",
    "Observation",
    "Orientation",
    "profile_lr_ci",
    "QuadratureError",
    "QuantileKind",
    "Query",
    "RangeError",
    "RectHyperbola",
    "relationships",
    "residuals",
    "rfl_life_cdf",
    "rfl_life_pdf",
    "rfl_quantile",
    "rfl_strength_cdf",
    "RflModel",
    "simulate_dataset",
    "StandardDistribution",
    "Status",
    "std_cdf",
    "std_pdf",
    "std_quantile",
    "strength_cdf",
    "strength_pdf",
    "strength_quantile",
    "Stromeyer",
    "wald_ci",
]
