"""Maximum-likelihood fitting in unrestricted coordinates."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from ..errors import DataError, FitError
from .dataset import Dataset, ScaledDataset
from .likelihood import loglik_terms
from .parameterization import Anchors, Parameterization

__all__ = ["FittedModel", "fit_mle", "numeric_gradient", "numeric_hessian", "maximize"]

# objective value standing in for an invalid parameter vector
_INVALID = -1e300


def _steps(theta, rel):
    return rel * np.maximum(1.0, np.abs(theta))


def numeric_gradient(f, theta, rel: float = 1e-6) -> np.ndarray:
    """Central-difference gradient with steps ``rel * max(1, |theta_i|)``."""
    theta = np.asarray(theta, dtype=float)
    h = _steps(theta, rel)
    g = np.empty_like(theta)
    for i in range(theta.size):
        e = np.zeros_like(theta)
        e[i] = h[i]
        g[i] = (f(theta + e) - f(theta - e)) / (2.0 * h[i])
    return g


def _gradient5(f, theta, rel: float = 1e-3) -> np.ndarray:
    """Five-point stencil gradient; falls back to the plain one near invalid regions."""
    theta = np.asarray(theta, dtype=float)
    h = _steps(theta, rel)
    g = np.empty_like(theta)
    for i in range(theta.size):
        e = np.zeros_like(theta)
        e[i] = h[i]
        vals = [f(theta + k * e) for k in (-2, -1, 1, 2)]
        if min(vals) <= _INVALID / 2:
            return numeric_gradient(f, theta)
        g[i] = (vals[0] - 8.0 * vals[1] + 8.0 * vals[2] - vals[3]) / (12.0 * h[i])
    return g


def numeric_hessian(f, theta, rel: float = 1e-4) -> np.ndarray:
    """Central-difference Hessian with steps ``rel * max(1, |theta_i|)``."""
    theta = np.asarray(theta, dtype=float)
    k = theta.size
    h = _steps(theta, rel)
    f0 = f(theta)
    H = np.empty((k, k))
    for i in range(k):
        ei = np.zeros(k)
        ei[i] = h[i]
        H[i, i] = (f(theta + ei) - 2.0 * f0 + f(theta - ei)) / h[i] ** 2
        for j in range(i):
            ej = np.zeros(k)
            ej[j] = h[j]
            v = (f(theta + ei + ej) - f(theta + ei - ej) - f(theta - ei + ej) + f(theta - ei - ej))
            H[i, j] = H[j, i] = v / (4.0 * h[i] * h[j])
    return H


@dataclass
class _Result:
    theta: np.ndarray
    value: float
    evals: int
    step: float


def maximize(f, theta0, max_evals: int = 10_000, simplex: bool = True, polish: bool = True) -> _Result:
    """Maximize ``f`` by simplex search, then BFGS, then Newton polishing.

    ``f`` returns a very negative number for invalid points.  The result
    carries the size of the last polishing step relative to ``1 + |theta|``.
    """
    count = [0]

    def neg(x):
        count[0] += 1
        v = f(x)
        return -v if np.isfinite(v) else -_INVALID

    x = np.asarray(theta0, dtype=float)
    if simplex and x.size > 1:
        res = optimize.minimize(neg, x, method="Nelder-Mead",
                                options={"maxfev": max(200, max_evals // 2), "adaptive": True,
                                         "xatol": 1e-8, "fatol": 1e-10})
        x = res.x
    budget = max_evals - count[0]
    if budget > 0:
        def jac(z):
            return numeric_gradient(neg, z)

        res = optimize.minimize(neg, x, jac=jac, method="BFGS",
                                options={"gtol": 1e-7, "maxiter": max(10, budget // (2 * x.size + 2))})
        if res.fun <= neg(x):
            x = res.x
    best = -neg(x)
    step = math.inf
    if polish:
        for _ in range(30):
            if count[0] >= max_evals:
                break
            g = _gradient5(f, x)
            H = numeric_hessian(f, x)
            try:
                w, V = np.linalg.eigh(H)
            except np.linalg.LinAlgError:
                break
            if not np.all(np.isfinite(w)):
                break
            # Newton step on the negative-definite part only
            w_safe = np.where(w < 0.0, w, -np.maximum(np.abs(w), 1e-8) - 1.0)
            delta = -V @ ((V.T @ g) / w_safe)
            accepted = False
            for shrink in (1.0, 0.5, 0.25, 0.1, 0.01):
                cand = x + shrink * delta
                v = f(cand)
                count[0] += 1
                if v >= best - 1e-12 * (1.0 + abs(best)):
                    accepted = True
                    break
            if not accepted:
                step = 0.0
                break
            step = float(np.max(np.abs(shrink * delta) / (1.0 + np.abs(x))))
            x, best = cand, v
            if step < 1e-9:
                break
    return _Result(x, best, count[0], step)


@dataclass
class FittedModel:
    """Result of :func:`fit_mle`.

    ``spec`` and ``natural_params`` are in the original units; ``hessian`` is
    the Hessian of the log-likelihood in the stable coordinates.
    """

    spec: object
    stable_params: np.ndarray
    natural_params: dict
    loglik: float
    hessian: np.ndarray
    converged: bool
    iterations: int
    scaling: tuple
    parameterization: Parameterization = field(repr=False)
    data: ScaledDataset = field(repr=False)
    standard_errors: dict = field(default_factory=dict)
    gradient_norm: float = math.nan
    flags: tuple = ()
    equivalent_fit: "FittedModel | None" = field(default=None, repr=False)

    @property
    def family(self) -> str:
        return self.parameterization.family

    @property
    def n_params(self) -> int:
        return self.parameterization.size

    @property
    def stable_names(self) -> tuple[str, ...]:
        return self.parameterization.names

    def spec_at(self, theta):
        """Model in original units for a stable vector (``ValueError`` if invalid)."""
        s_max, n_max = self.scaling
        return self.parameterization.from_stable(theta).change_units(s_max, n_max)

    def loglik_at(self, theta) -> float:
        """Log-likelihood in original units at a stable vector."""
        return _scaled_loglik(self.parameterization, self.data, theta) - self._jacobian

    @property
    def _jacobian(self) -> float:
        return self.data.original.n_failures * math.log(self.scaling[1])

    def covariance(self) -> np.ndarray:
        """Inverse observed information in stable coordinates."""
        H = np.asarray(self.hessian, dtype=float)
        w = np.linalg.eigvalsh(H)
        if not np.all(w < 0.0) or np.min(np.abs(w)) < 1e-12 * np.max(np.abs(w)):
            raise FitError("Hessian is singular or not negative definite; "
                           "use profile-likelihood intervals instead of Wald intervals", best=self)
        return np.linalg.inv(-H)


def _scaled_loglik(param: Parameterization, data: ScaledDataset, theta) -> float:
    try:
        spec = param.from_stable(theta)
    except (ValueError, ArithmeticError, OverflowError, np.linalg.LinAlgError):
        return _INVALID
    with np.errstate(all="ignore"):
        terms, _ = loglik_terms(spec, data.stress, data.cycles, data.failed)
    total = float(np.sum(terms))
    return total if np.isfinite(total) else _INVALID


def _penalized_count(param, data, theta) -> int:
    spec = param.from_stable(theta)
    with np.errstate(all="ignore"):
        _, bad = loglik_terms(spec, data.stress, data.cycles, data.failed)
    return int(bad.sum())


def _natural_jacobian(param, theta, s_max, n_max) -> np.ndarray:
    def nat(t):
        return param.natural_vector(param.from_stable(t).change_units(s_max, n_max))

    base = nat(theta)
    J = np.empty((base.size, theta.size))
    h = _steps(theta, 1e-6)
    for i in range(theta.size):
        e = np.zeros_like(theta)
        e[i] = h[i]
        try:
            J[:, i] = (nat(theta + e) - nat(theta - e)) / (2.0 * h[i])
        except ValueError:
            J[:, i] = (nat(theta + e) - base) / h[i]
    return J


def fit_mle(data: Dataset, relationship: str, distribution="lognormal", orientation=None,
            spread: str = "constant", *, scale: bool = True, starts=None,
            max_evals: int = 10_000, dist_gamma=None, strict: bool = False,
            check_flat_profile: bool = True) -> FittedModel:
    """Fit a model to censored S-N data by maximum likelihood.

    Parameters
    ----------
    data : Dataset
        Observations; at least one failure is required.
    relationship : str
        Curve family tag, or ``"rfl"`` for the random fatigue-limit model.
    distribution : str
        Error kernel (``normal``/``lognormal`` or ``sev``/``weibull``).
    orientation : str, optional
        ``"life"`` or ``"strength"``; defaults to the family's usual choice.
    spread : str
        ``"constant"`` or ``"loglinear"`` (life-specified only).
    scale : bool
        Fit on data divided by the maximum stress and cycles.
    starts : sequence of arrays, optional
        Extra starting points in stable coordinates (scaled units).
    strict : bool
        Raise :class:`FitError` instead of warning when not converged.

    Returns
    -------
    FittedModel
    """
    from ..relationships import family_class

    if len(data) == 0 or data.n_failures == 0:
        raise DataError("no failures: likelihood unbounded/uninformative")
    if orientation is None:
        if relationship == "rfl":
            orientation = "life"
        else:
            cls = family_class(relationship)
            orientation = cls.recommended_orientation
            if orientation == "either":
                orientation = "life" if spread == "loglinear" else "strength"
    s_max, n_max = (data.s_max, data.n_max) if scale else (1.0, 1.0)
    scaled = ScaledDataset(data, s_max, n_max)
    anchors = Anchors.from_data(scaled.stress, scaled.cycles, scaled.failed, n_max=data.n_max / n_max)
    param = Parameterization(relationship, orientation, distribution, spread, anchors,
                             dist_gamma=dist_gamma)

    def f(theta):
        return _scaled_loglik(param, scaled, theta)

    candidates = list(param.starts(scaled.stress, scaled.cycles, scaled.failed))
    if starts is not None:
        candidates = [np.asarray(s, dtype=float) for s in starts] + candidates
    candidates = [c for c in candidates if f(c) > _INVALID]
    if not candidates:
        raise FitError("no valid starting point could be constructed")
    per_start = max(1000, max_evals // len(candidates))
    results = [maximize(f, c, max_evals=per_start) for c in candidates]
    best = max(results, key=lambda r: r.value)
    iterations = sum(r.evals for r in results)
    return _finish(param, scaled, f, best.theta, best.step, iterations, strict, check_flat_profile)


def _finish(param, scaled, f, theta, step, iterations, strict, check_flat_profile):
    s_max, n_max = scaled.s_max, scaled.n_max
    ll_scaled = f(theta)
    if ll_scaled <= _INVALID / 2:
        raise FitError("optimizer did not find a valid parameter vector")
    if _penalized_count(param, scaled, theta):
        raise FitError("threshold conflict: failures remain below the fitted threshold at the optimum")
    g = _gradient5(f, theta)
    H = numeric_hessian(f, theta)
    gnorm = float(np.max(np.abs(g)))
    eig = np.linalg.eigvalsh(H) if np.all(np.isfinite(H)) else np.array([np.nan])
    converged = bool(gnorm < 1e-6 * (1.0 + abs(ll_scaled)) and np.all(eig < 0.0)
                     and (step < 1e-9 or gnorm < 1e-8 * (1.0 + abs(ll_scaled))))
    spec = param.from_stable(theta).change_units(s_max, n_max)
    natural = dict(zip(param.natural_names, map(float, param.natural_vector(spec))))
    ses = {}
    if np.all(eig < 0.0):
        try:
            J = _natural_jacobian(param, theta, s_max, n_max)
            cov = J @ np.linalg.inv(-H) @ J.T
            ses = dict(zip(param.natural_names, map(float, np.sqrt(np.maximum(np.diag(cov), 0.0)))))
        except (ValueError, np.linalg.LinAlgError):
            ses = {}
    fit = FittedModel(
        spec=spec,
        stable_params=np.asarray(theta, dtype=float),
        natural_params=natural,
        loglik=ll_scaled - scaled.original.n_failures * math.log(n_max),
        hessian=H,
        converged=converged,
        iterations=iterations,
        scaling=(s_max, n_max),
        parameterization=param,
        data=scaled,
        standard_errors=ses,
        gradient_norm=gnorm,
    )
    if check_flat_profile and param.family == "nishijima":
        _check_nishijima_flatness(fit, f)
    if not fit.converged and "flat_qlogisp" not in fit.flags:
        msg = f"fit did not converge (gradient norm {gnorm:.3g})"
        if strict:
            raise FitError(msg, best=fit)
        warnings.warn(msg, RuntimeWarning, stacklevel=3)
    return fit


def profile_values(f, theta, index: int, values, max_evals: int = 2000):
    """Profile log-likelihood of ``f`` with coordinate ``index`` held at each value."""
    theta = np.asarray(theta, dtype=float)
    free = [i for i in range(theta.size) if i != index]
    out = []
    warm = theta[free].copy()
    for v in values:
        def g(phi, v=v):
            full = theta.copy()
            full[free] = phi
            full[index] = v
            return f(full)

        res = maximize(g, warm, max_evals=max_evals, simplex=True, polish=False)
        warm = res.theta
        out.append(res.value)
    return np.array(out)


def _check_nishijima_flatness(fit: FittedModel, f) -> None:
    """Flag a flat profile in the curvature coordinate and attach the hyperbola limit."""
    param = fit.parameterization
    idx = param.names.index("qlogisp")
    # the search range for the curvature logit is [0, 12]; flatness is judged on its upper half
    grid = np.linspace(6.0, 12.0, 5)
    prof = profile_values(f, fit.stable_params, idx, grid)
    # flat and as good as the optimum: the hyperbola limit explains the data equally well
    ll_hat = f(fit.stable_params)
    if np.ptp(prof) < 0.02 and ll_hat - np.max(prof) < 0.02:
        fit.flags = fit.flags + ("flat_qlogisp",)
        data = fit.data.original
        try:
            fit.equivalent_fit = fit_mle(data, "rect_hyperbola", param.dist.value, param.orientation.value,
                                         param.spread, scale=fit.scaling != (1.0, 1.0))
        except (FitError, DataError):
            fit.equivalent_fit = None
        warnings.warn("Nishijima curvature is not identified (flat profile); "
                      "the rectangular-hyperbola limit is an equivalent fit", RuntimeWarning, stacklevel=4)


def refit_from(fit: FittedModel, theta) -> FittedModel:
    """Re-run the optimizer on the same data and parameterization from ``theta``."""
    param, scaled = fit.parameterization, fit.data

    def f(t):
        return _scaled_loglik(param, scaled, t)

    r = maximize(f, theta)
    return _finish(param, scaled, f, r.theta, r.step, r.evals, False, False)

