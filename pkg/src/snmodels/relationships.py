"""Catalog of S-N curves.

Every curve is available in both directions on log-log axes:

* ``log_g(log S)`` gives log cycles at a stress (the life reading, ``N = g(S)``),
* ``log_h(log N)`` gives log stress at a cycle count (the strength reading,
  ``S = h(N)``),

together with the log-log slopes needed for induced densities.  Each family is
written in whichever direction has a closed form; the other direction is a
closed-form inverse where one exists and a bracketed bisection otherwise
(Coffin-Manson and the modified Bastenaire curve).

The methods on the classes are vectorized and take log coordinates.  Outside
the domain they return extended values rather than raising: ``log_h`` is
``+inf`` at or below a vertical asymptote and ``log_g`` is ``+inf`` at or below
a horizontal asymptote (the stress never fails, the cycle count is never
reached).  The ``eval_*`` functions at the bottom of the module are the strict
scalar-or-array public API.
"""
from __future__ import annotations

import abc
import math
from dataclasses import dataclass, fields
from typing import ClassVar

import numpy as np

from .errors import DomainError, RangeError

__all__ = [
    "AsymptoteInfo",
    "Relationship",
    "Basquin",
    "Stromeyer",
    "BoxCox",
    "CoffinManson",
    "Nishijima",
    "RectHyperbola",
    "ModifiedBastenaire",
    "FAMILIES",
    "relationship_from_params",
    "eval_log_g",
    "eval_log_h",
    "invert_h",
    "dlogh_dt",
    "dlogg_dx",
    "asymptotes",
    "bisect_decreasing",
]

_LOG2 = math.log(2.0)
_BOXCOX_ZERO = 1e-12


@dataclass(frozen=True)
class AsymptoteInfo:
    """Coordinate asymptotes on log-log axes.

    ``vertical`` is the log-cycles bound ``B`` (life can never fall below
    ``exp(B)``); ``horizontal`` is the log-stress bound ``E`` (a fatigue limit).
    ``None`` means the curve has no such asymptote.
    """

    vertical: float | None = None
    horizontal: float | None = None


def bisect_decreasing(f, lo, hi, tol=1e-12, maxiter=200):
    """Vectorized bisection for a root of a decreasing function.

    ``f(lo) >= 0 >= f(hi)`` is assumed elementwise.  Terminates when every
    bracket is narrower than ``tol`` (absolute, floored at a few ulps of the
    bracket magnitude).
    """
    lo = np.array(lo, dtype=float, copy=True)
    hi = np.array(hi, dtype=float, copy=True)
    lo, hi = np.broadcast_arrays(lo, hi)
    lo, hi = lo.copy(), hi.copy()
    for _ in range(maxiter):
        width = hi - lo
        floor = 4.0 * np.spacing(np.maximum(np.abs(lo), np.abs(hi)))
        if np.all(width <= np.maximum(tol, floor)):
            break
        mid = 0.5 * (lo + hi)
        above = f(mid) > 0.0
        lo = np.where(above, mid, lo)
        hi = np.where(above, hi, mid)
    return 0.5 * (lo + hi)


class Relationship(abc.ABC):
    """Base class for S-N curves.  Subclasses are frozen dataclasses."""

    family: ClassVar[str]
    # orientation recommended for this family when fitting ("life",
    # "strength" or "either")
    recommended_orientation: ClassVar[str]
    # direction with a closed form, used for the construction-time check
    _primary: ClassVar[str]

    def __post_init__(self):
        self._check_constraints()
        self._check_monotone()

    # -- to be provided by subclasses --------------------------------------
    @abc.abstractmethod
    def _check_constraints(self) -> None: ...

    @abc.abstractmethod
    def log_h(self, logN): ...

    @abc.abstractmethod
    def log_g(self, logS): ...

    @abc.abstractmethod
    def dlogh_dlogN(self, logN):
        """Log-log slope ``d log h / d log N`` (negative)."""

    @abc.abstractmethod
    def asymptotes(self) -> AsymptoteInfo: ...

    @abc.abstractmethod
    def change_units(self, stress_unit: float, cycles_unit: float) -> "Relationship":
        """Re-express the curve after ``S -> stress_unit * S``, ``N -> cycles_unit * N``.

        The returned curve ``r`` satisfies
        ``r.log_h(log N + log cycles_unit) == self.log_h(log N) + log stress_unit``.
        """

    # -- shared helpers ----------------------------------------------------
    def dlogg_dlogS(self, logS):
        """Log-log slope ``d log g / d log S``; reciprocal of the ``h`` slope."""
        logS = np.asarray(logS, dtype=float)
        return 1.0 / self.dlogh_dlogN(self.log_g(logS))

    @property
    def params(self) -> dict[str, float]:
        return {f.name: float(getattr(self, f.name)) for f in fields(self)}

    @classmethod
    def param_names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))

    @property
    def vertical(self) -> float:
        v = self.asymptotes().vertical
        return -np.inf if v is None else v

    @property
    def horizontal(self) -> float:
        e = self.asymptotes().horizontal
        return -np.inf if e is None else e

    def _check_monotone(self) -> None:
        if self._primary == "h":
            lo = self.vertical + 1e-3 if np.isfinite(self.vertical) else -10.0
            grid = lo + np.linspace(0.0, 60.0, 25) ** 1.0
            vals = self.log_h(grid)
        else:
            lo = self.horizontal + 1e-3 if np.isfinite(self.horizontal) else -10.0
            grid = lo + np.linspace(0.0, 20.0, 25)
            vals = self.log_g(grid)
        vals = vals[np.isfinite(vals)]
        if vals.size > 1 and not np.all(np.diff(vals) < 0.0):
            raise ValueError(f"{self.family} curve is not strictly decreasing for {self.params}")


def _pos(name, value):
    if not value > 0.0:
        raise ValueError(f"{name} must be positive, got {value}")


def _neg(name, value):
    if not value < 0.0:
        raise ValueError(f"{name} must be negative, got {value}")


def _finite_params(obj):
    for f in fields(obj):
        v = getattr(obj, f.name)
        if not np.isfinite(v):
            raise ValueError(f"{f.name} must be finite, got {v}")


@dataclass(frozen=True)
class Basquin(Relationship):
    """Inverse power law, ``log N = beta0 + beta1 log S``."""

    beta0: float
    beta1: float

    family: ClassVar[str] = "basquin"
    recommended_orientation: ClassVar[str] = "life"
    _primary: ClassVar[str] = "g"

    def _check_constraints(self):
        _finite_params(self)
        _neg("beta1", self.beta1)

    def log_g(self, logS):
        return self.beta0 + self.beta1 * np.asarray(logS, dtype=float)

    def log_h(self, logN):
        return (np.asarray(logN, dtype=float) - self.beta0) / self.beta1

    def dlogh_dlogN(self, logN):
        return np.full(np.shape(logN), 1.0 / self.beta1)

    def dlogg_dlogS(self, logS):
        return np.full(np.shape(logS), self.beta1)

    def asymptotes(self):
        return AsymptoteInfo()

    def change_units(self, stress_unit, cycles_unit):
        return Basquin(
            self.beta0 + math.log(cycles_unit) - self.beta1 * math.log(stress_unit), self.beta1
        )


@dataclass(frozen=True)
class Stromeyer(Relationship):
    """Fatigue-limit curve, ``log N = beta0 + beta1 log(S - gamma)`` with ``gamma`` in stress units."""

    beta0: float
    beta1: float
    gamma: float

    family: ClassVar[str] = "stromeyer"
    recommended_orientation: ClassVar[str] = "either"
    _primary: ClassVar[str] = "g"

    def _check_constraints(self):
        _finite_params(self)
        _neg("beta1", self.beta1)
        if not self.gamma >= 0.0:
            raise ValueError(f"gamma must be nonnegative, got {self.gamma}")

    def _log_excess(self, logS):
        # log(S - gamma), -inf at or below gamma
        logS = np.asarray(logS, dtype=float)
        if self.gamma == 0.0:
            return logS
        ratio = np.exp(math.log(self.gamma) - logS)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = logS + np.log1p(-np.minimum(ratio, 1.0))
        return out

    def log_g(self, logS):
        excess = self._log_excess(logS)
        out = self.beta0 + self.beta1 * excess
        return np.where(np.isneginf(excess), np.inf, out)

    def log_h(self, logN):
        u = (np.asarray(logN, dtype=float) - self.beta0) / self.beta1
        if self.gamma == 0.0:
            return u
        return np.logaddexp(math.log(self.gamma), u)

    def dlogh_dlogN(self, logN):
        u = (np.asarray(logN, dtype=float) - self.beta0) / self.beta1
        if self.gamma == 0.0:
            return np.full(np.shape(u), 1.0 / self.beta1)
        return np.exp(u - np.logaddexp(math.log(self.gamma), u)) / self.beta1

    def dlogg_dlogS(self, logS):
        logS = np.asarray(logS, dtype=float)
        if self.gamma == 0.0:
            return np.full(np.shape(logS), self.beta1)
        with np.errstate(divide="ignore"):
            return self.beta1 / -np.expm1(math.log(self.gamma) - logS)

    def asymptotes(self):
        return AsymptoteInfo(horizontal=math.log(self.gamma) if self.gamma > 0.0 else None)

    def change_units(self, stress_unit, cycles_unit):
        return Stromeyer(
            self.beta0 + math.log(cycles_unit) - self.beta1 * math.log(stress_unit),
            self.beta1,
            self.gamma * stress_unit,
        )


def boxcox_nu(logS, lam):
    """Box-Cox transform ``(S**lam - 1)/lam`` of ``S = exp(logS)``; ``log S`` at ``lam = 0``."""
    logS = np.asarray(logS, dtype=float)
    if abs(lam) < _BOXCOX_ZERO:
        return logS
    return np.expm1(lam * logS) / lam


@dataclass(frozen=True)
class BoxCox(Relationship):
    """Box-Cox transformed stress, ``log N = beta0 + beta1 nu(S; lam)``.

    For ``lam < 0`` the curve has a vertical asymptote at
    ``B = beta0 - beta1/lam``; ``lam = 0`` is the Basquin curve.
    """

    beta0: float
    beta1: float
    lam: float

    family: ClassVar[str] = "boxcox"
    recommended_orientation: ClassVar[str] = "either"
    _primary: ClassVar[str] = "g"

    def _check_constraints(self):
        _finite_params(self)
        _neg("beta1", self.beta1)
        if not self.lam <= 0.0:
            raise ValueError(f"lam must be nonpositive, got {self.lam}")

    @property
    def _is_log(self):
        return abs(self.lam) < _BOXCOX_ZERO

    def log_g(self, logS):
        return self.beta0 + self.beta1 * boxcox_nu(logS, self.lam)

    def log_h(self, logN):
        nu = (np.asarray(logN, dtype=float) - self.beta0) / self.beta1
        if self._is_log:
            return nu
        arg = self.lam * nu
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.log1p(arg) / self.lam
        return np.where(arg <= -1.0, np.inf, out)

    def dlogh_dlogN(self, logN):
        nu = (np.asarray(logN, dtype=float) - self.beta0) / self.beta1
        if self._is_log:
            return np.full(np.shape(nu), 1.0 / self.beta1)
        with np.errstate(divide="ignore"):
            return (1.0 / self.beta1) / (1.0 + self.lam * nu)

    def dlogg_dlogS(self, logS):
        return self.beta1 * np.exp(self.lam * np.asarray(logS, dtype=float))

    def asymptotes(self):
        if self._is_log:
            return AsymptoteInfo()
        return AsymptoteInfo(vertical=self.beta0 - self.beta1 / self.lam)

    def change_units(self, stress_unit, cycles_unit):
        a = math.log(stress_unit)
        if self._is_log:
            k, d = 1.0, -a
        else:
            k = math.exp(-self.lam * a)
            d = math.expm1(-self.lam * a) / self.lam
        return BoxCox(self.beta0 + math.log(cycles_unit) + self.beta1 * d, self.beta1 * k, self.lam)


@dataclass(frozen=True)
class CoffinManson(Relationship):
    """Strain-life curve, ``S = Ael (2N)**b + Apl (2N)**c``."""

    Ael: float
    Apl: float
    b: float
    c: float

    family: ClassVar[str] = "coffin_manson"
    recommended_orientation: ClassVar[str] = "strength"
    _primary: ClassVar[str] = "h"

    def _check_constraints(self):
        _finite_params(self)
        _pos("Ael", self.Ael)
        if not self.Apl >= 0.0:
            raise ValueError(f"Apl must be nonnegative, got {self.Apl}")
        if not self.b <= 0.0:
            raise ValueError(f"b must be nonpositive, got {self.b}")
        _neg("c", self.c)
        if not abs(self.c) > abs(self.b):
            raise ValueError("the plastic exponent c must be steeper than the elastic exponent b")
        if self.b == 0.0 and self.Apl == 0.0:
            raise ValueError("b = 0 with Apl = 0 gives a flat curve")

    def _terms(self, logN):
        u = np.asarray(logN, dtype=float) + _LOG2
        t1 = math.log(self.Ael) + self.b * u
        if self.Apl == 0.0:
            return t1, None
        return t1, math.log(self.Apl) + self.c * u

    def log_h(self, logN):
        t1, t2 = self._terms(logN)
        return t1 if t2 is None else np.logaddexp(t1, t2)

    def dlogh_dlogN(self, logN):
        t1, t2 = self._terms(logN)
        if t2 is None:
            return np.full(np.shape(t1), self.b)
        total = np.logaddexp(t1, t2)
        return self.b * np.exp(t1 - total) + self.c * np.exp(t2 - total)

    def log_g(self, logS):
        logS = np.asarray(logS, dtype=float)
        la, lp = math.log(self.Ael), (math.log(self.Apl) if self.Apl > 0 else None)
        if lp is None:
            return (logS - la) / self.b - _LOG2
        if self.b == 0.0:
            with np.errstate(divide="ignore", invalid="ignore"):
                excess = logS + np.log1p(-np.exp(np.minimum(la - logS, 0.0)))
            out = (excess - lp) / self.c - _LOG2
            return np.where(logS <= la, np.inf, out)
        # each pure power-law term bounds the root from below; at half the
        # target stress each term bounds it from above
        lo = np.maximum((logS - la) / self.b, (logS - lp) / self.c) - _LOG2
        hi = np.maximum((logS - _LOG2 - la) / self.b, (logS - _LOG2 - lp) / self.c) - _LOG2
        return bisect_decreasing(lambda x: self.log_h(x) - logS, lo, hi)

    def asymptotes(self):
        if self.b == 0.0:
            return AsymptoteInfo(horizontal=math.log(self.Ael))
        return AsymptoteInfo()

    def change_units(self, stress_unit, cycles_unit):
        return CoffinManson(
            stress_unit * self.Ael * cycles_unit ** (-self.b),
            stress_unit * self.Apl * cycles_unit ** (-self.c),
            self.b,
            self.c,
        )


@dataclass(frozen=True)
class Nishijima(Relationship):
    """Hyperbola ``(log S - E)(log S + A log N - B) = C`` with fatigue limit ``E``."""

    A: float
    B: float
    C: float
    E: float

    family: ClassVar[str] = "nishijima"
    recommended_orientation: ClassVar[str] = "strength"
    _primary: ClassVar[str] = "h"

    def _check_constraints(self):
        _finite_params(self)
        _pos("A", self.A)
        _pos("C", self.C)

    def _u(self, logN):
        return self.A * np.asarray(logN, dtype=float) - (self.B - self.E)

    def log_h(self, logN):
        u = self._u(logN)
        r = np.hypot(u, 2.0 * math.sqrt(self.C))
        # (r - u)/2 written without cancellation for u > 0
        with np.errstate(divide="ignore", invalid="ignore"):
            excess = np.where(u > 0.0, 2.0 * self.C / (r + u), 0.5 * (r - u))
        return self.E + excess

    def dlogh_dlogN(self, logN):
        u = self._u(logN)
        r = np.hypot(u, 2.0 * math.sqrt(self.C))
        with np.errstate(divide="ignore", invalid="ignore"):
            factor = np.where(u > 0.0, -4.0 * self.C / (r * (r + u)), u / r - 1.0)
        return 0.5 * self.A * factor

    def log_g(self, logS):
        logS = np.asarray(logS, dtype=float)
        d = logS - self.E
        with np.errstate(divide="ignore", invalid="ignore"):
            out = (self.C / d - logS + self.B) / self.A
        return np.where(d <= 0.0, np.inf, out)

    def asymptotes(self):
        return AsymptoteInfo(horizontal=self.E)

    def change_units(self, stress_unit, cycles_unit):
        a, c = math.log(stress_unit), math.log(cycles_unit)
        return Nishijima(self.A, self.B + a + self.A * c, self.C, self.E + a)


@dataclass(frozen=True)
class RectHyperbola(Relationship):
    """Rectangular hyperbola ``(log N - B)(log S - E) = C`` with both asymptotes."""

    B: float
    C: float
    E: float

    family: ClassVar[str] = "rect_hyperbola"
    recommended_orientation: ClassVar[str] = "strength"
    _primary: ClassVar[str] = "h"

    def _check_constraints(self):
        _finite_params(self)
        _pos("C", self.C)

    def log_h(self, logN):
        d = np.asarray(logN, dtype=float) - self.B
        with np.errstate(divide="ignore", invalid="ignore"):
            out = self.C / d + self.E
        return np.where(d <= 0.0, np.inf, out)

    def dlogh_dlogN(self, logN):
        d = np.asarray(logN, dtype=float) - self.B
        with np.errstate(divide="ignore"):
            return -self.C / (d * d)

    def log_g(self, logS):
        d = np.asarray(logS, dtype=float) - self.E
        with np.errstate(divide="ignore", invalid="ignore"):
            out = self.B + self.C / d
        return np.where(d <= 0.0, np.inf, out)

    def dlogg_dlogS(self, logS):
        d = np.asarray(logS, dtype=float) - self.E
        with np.errstate(divide="ignore"):
            return -self.C / (d * d)

    def asymptotes(self):
        return AsymptoteInfo(vertical=self.B, horizontal=self.E)

    def change_units(self, stress_unit, cycles_unit):
        return RectHyperbola(self.B + math.log(cycles_unit), self.C, self.E + math.log(stress_unit))


@dataclass(frozen=True)
class ModifiedBastenaire(Relationship):
    """``N = A exp(-((S - E)/B)**C) / (S - E)`` for ``S > E`` (``E`` in stress units).

    The original three-parameter Bastenaire curve is the special case ``C = 1``;
    see :meth:`original`.
    """

    A: float
    B: float
    C: float
    E: float

    family: ClassVar[str] = "modified_bastenaire"
    recommended_orientation: ClassVar[str] = "strength"
    _primary: ClassVar[str] = "g"

    @classmethod
    def original(cls, A: float, C: float, E: float) -> "ModifiedBastenaire":
        """Original form ``N = A exp(-C (S - E)) / (S - E)``."""
        return cls(A=A, B=1.0 / C, C=1.0, E=E)

    def _check_constraints(self):
        _finite_params(self)
        _pos("A", self.A)
        _pos("B", self.B)
        _pos("C", self.C)
        if not self.E >= 0.0:
            raise ValueError(f"E must be nonnegative, got {self.E}")

    def _log_excess(self, logS):
        logS = np.asarray(logS, dtype=float)
        if self.E == 0.0:
            return logS
        ratio = np.exp(math.log(self.E) - logS)
        with np.errstate(divide="ignore", invalid="ignore"):
            return logS + np.log1p(-np.minimum(ratio, 1.0))

    def _log_g_excess(self, y):
        # log g as a function of y = log(S - E)
        with np.errstate(over="ignore"):
            return math.log(self.A) - np.exp(self.C * (y - math.log(self.B))) - y

    def log_g(self, logS):
        y = self._log_excess(logS)
        return np.where(np.isneginf(y), np.inf, self._log_g_excess(y))

    def dlogg_dlogS(self, logS):
        logS = np.asarray(logS, dtype=float)
        y = self._log_excess(logS)
        with np.errstate(over="ignore"):
            power = self.C * np.exp(self.C * (y - math.log(self.B)))
        return -np.exp(logS - y) * (1.0 + power)

    def log_h(self, logN):
        target = math.log(self.A) - np.asarray(logN, dtype=float)
        lo = np.minimum(target - 1.0, math.log(self.B))
        y = bisect_decreasing(lambda y: self._log_g_excess(y) - (math.log(self.A) - target), lo, target)
        if self.E == 0.0:
            return y
        return np.logaddexp(math.log(self.E), y)

    def dlogh_dlogN(self, logN):
        return 1.0 / self.dlogg_dlogS(self.log_h(logN))

    def asymptotes(self):
        return AsymptoteInfo(horizontal=math.log(self.E) if self.E > 0.0 else None)

    def change_units(self, stress_unit, cycles_unit):
        return ModifiedBastenaire(
            self.A * cycles_unit * stress_unit, self.B * stress_unit, self.C, self.E * stress_unit
        )


FAMILIES: dict[str, type[Relationship]] = {
    cls.family: cls
    for cls in (Basquin, Stromeyer, BoxCox, CoffinManson, Nishijima, RectHyperbola, ModifiedBastenaire)
}

_FAMILY_ALIASES = {
    "coffinmanson": "coffin_manson",
    "coffin-manson": "coffin_manson",
    "rh": "rect_hyperbola",
    "recthyperbola": "rect_hyperbola",
    "rectangular_hyperbola": "rect_hyperbola",
    "box_cox": "boxcox",
    "box-cox": "boxcox",
    "bastenaire": "modified_bastenaire",
    "modifiedbastenaire": "modified_bastenaire",
}


def family_class(tag: str) -> type[Relationship]:
    key = tag.strip().lower()
    key = _FAMILY_ALIASES.get(key, key)
    try:
        return FAMILIES[key]
    except KeyError:
        raise ValueError(f"unknown relationship {tag!r}; expected one of {sorted(FAMILIES)}") from None


def relationship_from_params(tag: str, params) -> Relationship:
    """Build a relationship from a family tag and a name->value mapping."""
    cls = family_class(tag)
    names = cls.param_names()
    missing = [n for n in names if n not in params]
    if missing:
        raise ValueError(f"{cls.family} needs parameters {missing}")
    return cls(**{n: float(params[n]) for n in names})


# -- strict public API -------------------------------------------------------

def _positive(x, name):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr) & (arr > 0.0)):
        raise DomainError(f"{name} must be positive and finite", bound=0.0)
    return arr


def _out(value, like):
    value = np.asarray(value, dtype=float)
    return float(value) if np.ndim(like) == 0 else value


def _require_stress_domain(rel: Relationship, logS):
    e = rel.horizontal
    if np.isfinite(e) and np.any(logS <= e):
        raise DomainError(
            f"stress must exceed the fatigue limit {math.exp(e):.17g} of the {rel.family} curve",
            bound=math.exp(e),
        )


def _require_cycles_domain(rel: Relationship, logN):
    b = rel.vertical
    if np.isfinite(b) and np.any(logN <= b):
        raise DomainError(
            f"cycles must exceed the threshold {math.exp(b):.17g} of the {rel.family} curve",
            bound=math.exp(b),
        )


def eval_log_g(rel: Relationship, S):
    """Log cycles ``log g(S)`` on the curve at stress ``S``."""
    logS = np.log(_positive(S, "stress"))
    _require_stress_domain(rel, logS)
    return _out(rel.log_g(logS), logS)


def eval_log_h(rel: Relationship, N):
    """Log stress ``log h(N)`` on the curve at ``N`` cycles."""
    logN = np.log(_positive(N, "cycles"))
    _require_cycles_domain(rel, logN)
    return _out(rel.log_h(logN), logN)


def invert_h(rel: Relationship, S):
    """Cycles ``N`` with ``h(N) = S``."""
    logS = np.log(_positive(S, "stress"))
    e = rel.horizontal
    if np.isfinite(e) and np.any(logS <= e):
        raise RangeError(
            f"stress is at or below the horizontal asymptote {math.exp(e):.17g}",
            kind="below_asymptote",
            limit=math.exp(e),
        )
    return _out(np.exp(rel.log_g(logS)), logS)


def dlogh_dt(rel: Relationship, t):
    """Derivative ``d log h(t) / dt``."""
    t = _positive(t, "cycles")
    logt = np.log(t)
    _require_cycles_domain(rel, logt)
    return _out(rel.dlogh_dlogN(logt) / t, t)


def dlogg_dx(rel: Relationship, x):
    """Derivative ``d log g(x) / dx``."""
    x = _positive(x, "stress")
    logx = np.log(x)
    _require_stress_domain(rel, logx)
    return _out(rel.dlogg_dlogS(logx) / x, x)


def asymptotes(rel: Relationship) -> AsymptoteInfo:
    return rel.asymptotes()
