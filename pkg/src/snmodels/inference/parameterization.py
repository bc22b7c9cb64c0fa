"""Unrestricted ("stable") parameterizations used for fitting.

Optimizing directly over curve coefficients is fragile: the coefficients are
strongly correlated and several carry sign or ordering constraints.  Instead
each curve is pinned down by two points inside the data region plus shape
coordinates, all of which are unrestricted reals.

With ``x = log N`` and ``y = log S`` in scaled units:

* life-specified models fix the stresses ``y1 = log S_high`` and
  ``y2 = log S_low`` (extreme stresses with failures) and use
  ``(x1, log(x2 - x1))`` where ``x`` is the curve's log life there;
* strength-specified models fix ``x1 = log N_low`` (smallest cycle count in the
  data) and ``x2 = log N_high`` (largest failure) and use
  ``(y2, log(y1 - y2))``.

The shape coordinates follow the same idea: Coffin-Manson exponents relative
to the chord slope between the two points, Nishijima curvature as a logit
interpolation between the chord and the rectangular-hyperbola limit, and
asymptotes as log distances below the lower anchor stress.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit, logit

from ..errors import DataError
from ..extended import RflModel
from ..models import ConstantSpread, LogLinearSpread, ModelSpec, Orientation
from ..relationships import (
    Basquin,
    BoxCox,
    CoffinManson,
    ModifiedBastenaire,
    Nishijima,
    RectHyperbola,
    Stromeyer,
    boxcox_nu,
    family_class,
)
from ..distributions import parse_distribution

__all__ = ["Anchors", "Parameterization"]

_LOG2 = math.log(2.0)


def _logsubexp(a, b):
    """``log(exp(a) - exp(b))`` for ``a > b``."""
    if not a > b:
        raise ValueError("logsubexp needs a > b")
    return a + math.log(-math.expm1(b - a))


@dataclass(frozen=True)
class Anchors:
    """Data-derived reference points, in scaled log units."""

    log_s_low: float
    log_s_high: float
    log_n_low: float
    log_n_high: float
    log_s_min: float
    log_n_max_unscaled: float = 0.0

    @classmethod
    def from_data(cls, stress, cycles, failed, n_max: float = 1.0) -> "Anchors":
        stress = np.asarray(stress, dtype=float)
        cycles = np.asarray(cycles, dtype=float)
        failed = np.asarray(failed, dtype=bool)
        if not failed.any():
            raise DataError("no failures: likelihood unbounded/uninformative")
        sf = stress[failed]
        return cls(
            log_s_low=float(np.log(sf.min())),
            log_s_high=float(np.log(sf.max())),
            log_n_low=float(np.log(cycles.min())),
            log_n_high=float(np.log(cycles[failed].max())),
            log_s_min=float(np.log(stress.min())),
            log_n_max_unscaled=float(math.log(n_max)),
        )

    def as_dict(self) -> dict[str, float]:
        return dict(self.__dict__)


# -- two-point curve families --------------------------------------------------
# each entry: (shape names, build(p1, p2, shape) -> rel, shape_of(rel, p1, p2))

def _basquin_build(p1, p2, shape):
    (x1, y1), (x2, y2) = p1, p2
    b1 = (x2 - x1) / (y2 - y1)
    return Basquin(x1 - b1 * y1, b1)


def _stromeyer_build(p1, p2, shape):
    (x1, y1), (x2, y2) = p1, p2
    gamma = math.exp(y2) * float(expit(shape[0]))
    l1 = y1 + math.log1p(-gamma * math.exp(-y1))
    l2 = y2 + math.log1p(-gamma * math.exp(-y2))
    b1 = (x2 - x1) / (l2 - l1)
    return Stromeyer(x1 - b1 * l1, b1, gamma)


def _stromeyer_shape(rel, p1, p2):
    return [float(logit(rel.gamma / math.exp(p2[1])))]


def _boxcox_build(p1, p2, shape):
    (x1, y1), (x2, y2) = p1, p2
    lam = -math.exp(shape[0])
    n1, n2 = float(boxcox_nu(y1, lam)), float(boxcox_nu(y2, lam))
    b1 = (x2 - x1) / (n2 - n1)
    return BoxCox(x1 - b1 * n1, b1, lam)


def _boxcox_shape(rel, p1, p2):
    return [math.log(-rel.lam)]


def _cm_build(p1, p2, shape):
    (x1, y1), (x2, y2) = p1, p2
    m = (y2 - y1) / (x2 - x1)
    b = m * float(expit(shape[0]))
    c = m - math.exp(shape[1])
    u1, u2 = x1 + _LOG2, x2 + _LOG2
    log_det = _logsubexp(c * u1 + b * u2, b * u1 + c * u2)
    log_ael = _logsubexp(y2 + c * u1, y1 + c * u2) - log_det
    log_apl = _logsubexp(y1 + b * u2, y2 + b * u1) - log_det
    return CoffinManson(math.exp(log_ael), math.exp(log_apl), b, c)


def _cm_shape(rel, p1, p2):
    (x1, y1), (x2, y2) = p1, p2
    m = (y2 - y1) / (x2 - x1)
    return [float(logit(rel.b / m)), math.log(m - rel.c)]


def _nishijima_mid(p1, p2, E):
    (x1, y1), (x2, y2) = p1, p2
    lo, hi = y2 - E, y1 - E
    upper = 0.5 * (y1 + y2)
    lower = 2.0 * lo * hi / (lo + hi) + E
    return 0.5 * (x1 + x2), upper, lower


def _nishijima_build(p1, p2, shape):
    (x1, y1), (x2, y2) = p1, p2
    E = y2 - math.exp(shape[1])
    xm, upper, lower = _nishijima_mid(p1, p2, E)
    ym = upper - float(expit(shape[0])) * (upper - lower)
    d1, d2, dm = y1 - E, y2 - E, ym - E
    # y + A x - B = C/d at each point; difference out B
    lhs = np.array([[x1 - x2, -(1.0 / d1 - 1.0 / d2)], [xm - x2, -(1.0 / dm - 1.0 / d2)]])
    rhs = np.array([-(y1 - y2), -(ym - y2)])
    A, C = np.linalg.solve(lhs, rhs)
    B = y2 + A * x2 - C / d2
    return Nishijima(float(A), float(B), float(C), E)


def _nishijima_shape(rel, p1, p2):
    E = rel.E
    xm, upper, lower = _nishijima_mid(p1, p2, E)
    ym = float(rel.log_h(xm))
    p = (upper - ym) / (upper - lower)
    return [float(logit(p)), math.log(p2[1] - E)]


def _rh_build(p1, p2, shape):
    (x1, y1), (x2, y2) = p1, p2
    E = y2 - math.exp(shape[0])
    lo, hi = y2 - E, y1 - E
    C = (x2 - x1) / (1.0 / lo - 1.0 / hi)
    return RectHyperbola(x2 - C / lo, C, E)


def _rh_shape(rel, p1, p2):
    return [math.log(p2[1] - rel.E)]


_TWO_POINT = {
    "basquin": ((), _basquin_build, lambda rel, p1, p2: []),
    "stromeyer": (("logit_gamma_fraction",), _stromeyer_build, _stromeyer_shape),
    "boxcox": (("log_neg_lambda",), _boxcox_build, _boxcox_shape),
    "coffin_manson": (("qlogisp", "log_delta_slopes"), _cm_build, _cm_shape),
    "nishijima": (("qlogisp", "log_delta_s_low_e"), _nishijima_build, _nishijima_shape),
    "rect_hyperbola": (("log_delta_s_low_e",), _rh_build, _rh_shape),
}


def _ols(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 2 or np.ptp(x) == 0.0:
        return 0.0, float(np.mean(y)), float(np.std(y))
    slope, icpt = np.polyfit(x, y, 1)
    resid = y - (icpt + slope * x)
    return float(slope), float(icpt), float(np.sqrt(np.mean(resid**2)))


class Parameterization:
    """Bijection between a model's natural parameters and unrestricted coordinates.

    Natural parameters here are in scaled units; callers convert with
    ``ModelSpec.change_units``.
    """

    def __init__(self, family: str, orientation, dist, spread: str, anchors: Anchors,
                 dist_gamma=None):
        self.family = "rfl" if family == "rfl" else family_class(family).family
        self.orientation = Orientation.parse(orientation)
        self.dist = parse_distribution(dist)
        self.dist_gamma = parse_distribution(dist_gamma) if dist_gamma is not None else self.dist
        self.spread = spread
        self.anchors = anchors
        if spread not in ("constant", "loglinear"):
            raise ValueError(f"unknown spread {spread!r}")
        if spread == "loglinear" and self.orientation is Orientation.STRENGTH:
            raise ValueError("log-linear spread is only available for life-specified models")
        if self.family == "rfl" and self.orientation is not Orientation.LIFE:
            raise ValueError("the random fatigue-limit model is life-specified")
        self._check_design()

    # -- names ---------------------------------------------------------------
    @property
    def curve_names(self) -> tuple[str, ...]:
        if self.family == "rfl":
            return ("beta0", "log_neg_beta1", "log_sigma_eps", "mu_loggamma", "log_sigma_loggamma")
        if self.family == "modified_bastenaire":
            return ("logit_e_fraction", "log_b", "log_c", "log_t_at_high_stress")
        loc = ("log_t_at_high_stress", "log_delta_t") if self.orientation is Orientation.LIFE \
            else ("log_s_at_low_life", "log_delta_s")
        return loc + _TWO_POINT[self.family][0]

    @property
    def spread_names(self) -> tuple[str, ...]:
        if self.family == "rfl":
            return ()
        if self.spread == "constant":
            return ("log_sigma",)
        return ("log_sigma_at_high_stress", "log_sigma_at_low_stress")

    @property
    def names(self) -> tuple[str, ...]:
        return self.curve_names + self.spread_names

    @property
    def natural_names(self) -> tuple[str, ...]:
        if self.family == "rfl":
            return ("beta0", "beta1", "sigma_eps", "mu_loggamma", "sigma_loggamma")
        rel_names = family_class(self.family).param_names()
        spread = ("sigma",) if self.spread == "constant" else ("sigma_b0", "sigma_b1")
        return rel_names + spread

    @property
    def location_index(self) -> int:
        """Coordinate that shifts the whole curve; used to impose profile constraints."""
        return 3 if self.family == "modified_bastenaire" else 0

    @property
    def size(self) -> int:
        return len(self.names)

    # -- helpers ---------------------------------------------------------------
    def _check_design(self):
        a = self.anchors
        if self.family == "rfl":
            return
        needs_stress_spread = self.orientation is Orientation.LIFE or self.spread == "loglinear" \
            or self.family == "modified_bastenaire"
        if needs_stress_spread and not a.log_s_high > a.log_s_low:
            raise DataError("insufficient design: failures at a single stress level")
        if self.orientation is Orientation.STRENGTH and not a.log_n_high > a.log_n_low:
            raise DataError("insufficient design: all failures at the smallest cycle count")

    def _fixed(self):
        a = self.anchors
        if self.orientation is Orientation.LIFE:
            return a.log_s_high, a.log_s_low
        return a.log_n_low, a.log_n_high

    def natural_vector(self, spec) -> np.ndarray:
        if isinstance(spec, RflModel):
            return np.array([spec.params[k] for k in self.natural_names])
        vals = dict(spec.rel.params)
        vals.update(spec.spread.params)
        return np.array([vals[k] for k in self.natural_names], dtype=float)

    def spec_from_natural(self, vec):
        vals = dict(zip(self.natural_names, map(float, vec)))
        if self.family == "rfl":
            return RflModel(**vals, dist_life=self.dist, dist_gamma=self.dist_gamma)
        cls = family_class(self.family)
        rel = cls(**{k: vals[k] for k in cls.param_names()})
        if self.spread == "constant":
            spread = ConstantSpread(vals["sigma"])
        else:
            spread = LogLinearSpread(vals["sigma_b0"], vals["sigma_b1"])
        return ModelSpec(self.orientation, rel, self.dist, spread)

    # -- transforms -----------------------------------------------------------------
    def from_stable(self, theta):
        """Scaled-unit model for an unrestricted vector; ``ValueError`` if degenerate."""
        theta = [float(t) for t in theta]
        if not all(math.isfinite(t) for t in theta):
            raise ValueError("non-finite stable coordinates")
        if self.family == "rfl":
            b0, lb1, lse, mu, lsg = theta
            return RflModel(b0, -math.exp(lb1), math.exp(lse), mu, math.exp(lsg),
                            self.dist, self.dist_gamma)
        n_curve = len(self.curve_names)
        curve, rest = theta[:n_curve], theta[n_curve:]
        a = self.anchors
        if self.family == "modified_bastenaire":
            te, lb, lc, x_ref = curve
            E = math.exp(a.log_s_low) * float(expit(te))
            B, C = math.exp(lb), math.exp(lc)
            s_ref = math.exp(a.log_s_high)
            log_a = x_ref + math.log(s_ref - E) + ((s_ref - E) / B) ** C
            rel = ModifiedBastenaire(math.exp(log_a), B, C, E)
        else:
            shape_names, build, _ = _TWO_POINT[self.family]
            c1, c2 = curve[:2]
            if self.orientation is Orientation.LIFE:
                y1, y2 = self._fixed()
                x1 = c1
                x2 = c1 + math.exp(c2)
            else:
                x1, x2 = self._fixed()
                y2 = c1
                y1 = c1 + math.exp(c2)
            rel = build((x1, y1), (x2, y2), curve[2:])
        if self.spread == "constant":
            spread = ConstantSpread(math.exp(rest[0]))
        else:
            l1, l2 = rest
            b1 = (l2 - l1) / (a.log_s_low - a.log_s_high)
            spread = LogLinearSpread(l1 - b1 * a.log_s_high, b1)
        return ModelSpec(self.orientation, rel, self.dist, spread)

    def to_stable(self, spec) -> np.ndarray:
        """Unrestricted vector for a scaled-unit model."""
        if self.family == "rfl":
            return np.array([spec.beta0, math.log(-spec.beta1), math.log(spec.sigma_eps),
                             spec.mu_loggamma, math.log(spec.sigma_loggamma)])
        a = self.anchors
        rel = spec.rel
        if self.family == "modified_bastenaire":
            curve = [float(logit(rel.E / math.exp(a.log_s_low))), math.log(rel.B), math.log(rel.C),
                     float(rel.log_g(a.log_s_high))]
        else:
            _, _, shape_of = _TWO_POINT[self.family]
            if self.orientation is Orientation.LIFE:
                y1, y2 = self._fixed()
                x1, x2 = float(rel.log_g(y1)), float(rel.log_g(y2))
                curve = [x1, math.log(x2 - x1)]
            else:
                x1, x2 = self._fixed()
                y1, y2 = float(rel.log_h(x1)), float(rel.log_h(x2))
                curve = [y2, math.log(y1 - y2)]
            curve += shape_of(rel, (x1, y1), (x2, y2))
        if self.spread == "constant":
            rest = [math.log(spec.spread.sigma)]
        else:
            rest = [float(spec.spread.log_sigma(a.log_s_high)), float(spec.spread.log_sigma(a.log_s_low))]
        return np.array(curve + rest, dtype=float)

    # -- starting values -----------------------------------------------------------
    def starts(self, stress, cycles, failed) -> list[np.ndarray]:
        """Candidate starting points from least squares on the failures."""
        a = self.anchors
        logs = np.log(np.asarray(stress, dtype=float))
        logn = np.log(np.asarray(cycles, dtype=float))
        failed = np.asarray(failed, dtype=bool)
        ls, ln = logs[failed], logn[failed]
        slope, icpt, sd = _ols(ls, ln)
        if not slope < -0.5:
            slope = -3.0
            icpt = float(np.mean(ln) - slope * np.mean(ls))
        sigma0 = max(sd, 0.05)
        e_guess = math.log(0.95) + a.log_s_min

        if self.family == "rfl":
            return [np.array([icpt, math.log(-slope), math.log(sigma0), e_guess, math.log(0.1)])]

        if self.orientation is Orientation.LIFE:
            y1, y2 = self._fixed()
            x1 = icpt + slope * y1
            x2 = max(icpt + slope * y2, x1 + 0.1)
            loc = [x1, math.log(x2 - x1)]
        else:
            x1, x2 = self._fixed()
            s_slope, s_icpt, s_sd = _ols(ln, ls)
            if not s_slope < -1e-3:
                s_slope = 1.0 / slope
                s_icpt = float(np.mean(ls) - s_slope * np.mean(ln))
            y1 = s_icpt + s_slope * x1
            y2 = s_icpt + s_slope * x2
            if not y1 > y2 + 1e-3:
                y1 = y2 + 0.1
            loc = [y2, math.log(y1 - y2)]
            sigma0 = max(s_sd, 0.01)
        if self.spread == "constant":
            spread = [[math.log(sigma0)]]
        else:
            spread = [[math.log(sigma0), math.log(sigma0)]]

        shapes = self._default_shapes(loc, (x1, y1), (x2, y2), icpt, slope)
        return [np.array(c + s + sp) for c, s in shapes for sp in spread]

    def _default_shapes(self, loc, p1, p2, icpt, slope):
        a = self.anchors
        e_guess = math.log(0.95) + a.log_s_min
        fam = self.family
        if fam == "basquin":
            return [(loc, [])]
        if fam == "stromeyer":
            frac = min(max(math.exp(e_guess - p2[1]), 0.02), 0.98)
            return [(loc, [float(logit(frac))]), (loc, [0.0])]
        if fam == "boxcox":
            # vertical asymptote at half the smallest observed log cycles
            b_guess = 0.5 * (a.log_n_low + a.log_n_max_unscaled) - a.log_n_max_unscaled
            lam = slope / (icpt - b_guess) if icpt > b_guess else -1.0
            lam = min(max(lam, -8.0), -0.02)
            return [(loc, [math.log(-lam)]), (loc, [0.0]), (loc, [math.log(0.2)])]
        if fam == "coffin_manson":
            m = (p2[1] - p1[1]) / (p2[0] - p1[0])
            return [(loc, [0.0, math.log(-m)]), (loc, [-1.5, math.log(-m)]),
                    (loc, [1.5, math.log(-0.5 * m)])]
        if fam in ("nishijima", "rect_hyperbola"):
            gap = p2[1] - e_guess
            le = math.log(gap) if gap > 1e-3 else math.log(0.05)
            if fam == "rect_hyperbola":
                return [(loc, [le]), (loc, [le + math.log(3.0)])]
            return [(loc, [0.0, le]), (loc, [2.0, le]), (loc, [-2.0, le])]
        if fam == "modified_bastenaire":
            frac = min(max(math.exp(e_guess - a.log_s_low), 0.02), 0.98)
            E = frac * math.exp(a.log_s_low)
            B = math.exp(a.log_s_high) - E
            x_ref = icpt + slope * a.log_s_high
            return [([float(logit(frac)), math.log(B), 0.0, x_ref], []),
                    ([0.0, math.log(B), math.log(2.0), x_ref], [])]
        raise ValueError(fam)
