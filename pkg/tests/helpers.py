"""Shared generators for test parameter sets."""
import math

import numpy as np

from snmodels.relationships import (
    Basquin,
    BoxCox,
    CoffinManson,
    ModifiedBastenaire,
    Nishijima,
    RectHyperbola,
    Stromeyer,
)

FAMILIES = ("basquin", "stromeyer", "boxcox", "coffin_manson", "nishijima", "rect_hyperbola",
            "modified_bastenaire")

# acceptance-suite summary lines, printed at the end of the session
ACCEPTANCE_LINES = []


def report(number, title, passed, detail=""):
    """Record one summary line; ``passed=None`` marks a skipped criterion."""
    tag = "SKIP" if passed is None else ("PASS" if passed else "FAIL")
    line = f"[{tag}] criterion {number}: {title}" + (f" ({detail})" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    return passed


def random_relationship(family, rng):
    """A valid curve with parameters spread over plausible scaled-data values."""
    u = rng.uniform
    if family == "basquin":
        return Basquin(u(-12, -6), u(-12, -2))
    if family == "stromeyer":
        return Stromeyer(u(-10, -5), u(-8, -1), u(0.0, 0.25))
    if family == "boxcox":
        return BoxCox(u(-10, -6), u(-10, -2), u(-3, -0.05))
    if family == "coffin_manson":
        return CoffinManson(math.exp(u(-1.5, 0)), math.exp(u(-3, 1)), u(-0.15, -0.02), u(-1.0, -0.4))
    if family == "nishijima":
        return Nishijima(u(0.02, 0.5), u(-3, 0), math.exp(u(-4, -1)), u(-2, -0.5))
    if family == "rect_hyperbola":
        return RectHyperbola(u(-14, -8), math.exp(u(-1, 2)), u(-2, -0.5))
    if family == "modified_bastenaire":
        return ModifiedBastenaire(math.exp(u(-8, -3)), math.exp(u(-2, 0)), u(0.5, 3), u(0.0, 0.3))
    raise ValueError(family)


def log_cycle_grid(rel, n=20):
    """Log-cycle values inside the curve's domain."""
    v = rel.vertical
    lo = v + 0.5 if np.isfinite(v) else -14.0
    return np.linspace(lo, lo + 14.0, n)


def stress_grid(rel, n=20):
    """Stresses on the curve at the cycle grid, so every point is attainable."""
    return np.exp(rel.log_h(log_cycle_grid(rel, n)))
