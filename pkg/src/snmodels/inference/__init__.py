"""Likelihood, fitting, intervals, residuals and simulation for censored S-N data."""
from .dataset import Dataset, Observation, ScaledDataset, Status
from .diagnostics import Residual, fitted_values, residual_summary, residuals
from .fitting import FittedModel, fit_mle
from .intervals import Interval, Query, profile_lr_ci, wald_ci
from .likelihood import PENALTY, log_likelihood
from .parameterization import Anchors, Parameterization
from .simulation import simulate_dataset

__all__ = [
    "Anchors",
    "Dataset",
    "FittedModel",
    "Interval",
    "Observation",
    "PENALTY",
    "Parameterization",
    "Query",
    "Residual",
    "ScaledDataset",
    "Status",
    "fit_mle",
    "fitted_values",
    "log_likelihood",
    "profile_lr_ci",
    "residual_summary",
    "residuals",
    "simulate_dataset",
    "wald_ci",
]
