"""Dataset ingestion, scaling, nonparametric group estimates, plot data and fit records."""
from __future__ import annotations

import csv
import enum
import io
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple

import numpy as np

from .distributions import parse_distribution
from .errors import DataError, DomainError, RangeError
from .extended import RflModel, rfl_life_pdf, rfl_quantile
from .inference.dataset import Dataset, Observation, ScaledDataset, Status
from .inference.diagnostics import residuals
from .inference.fitting import FittedModel
from .inference.parameterization import Anchors, Parameterization
from .models import ModelSpec, life_pdf, life_quantile

__all__ = [
    "parse_dataset",
    "read_dataset",
    "format_dataset",
    "write_dataset",
    "scale_dataset",
    "GroupStep",
    "GroupEstimate",
    "group_nonparametric_cdf",
    "PlotKind",
    "Axis",
    "PlotPoint",
    "PlotSeries",
    "export_plot_data",
    "series_to_csv",
    "series_to_json",
    "fit_record",
    "dumps_fit_record",
    "loads_fit_record",
    "fitted_from_record",
    "atomic_write",
]

_STATUS = {"failure": Status.FAILURE, "1": Status.FAILURE, "runout": Status.RUNOUT, "0": Status.RUNOUT}
HEADER = ("stress", "cycles", "status")
RECORD_FORMAT = "snmodels-fit/1"


def _g17(x: float) -> str:
    return "%.17g" % x


# -- datasets --------------------------------------------------------------------

def parse_dataset(source, stress_units: str = "", cycles_units: str = "cycles") -> Dataset:
    """Read ``stress,cycles,status`` CSV from a text stream or string.

    Status tokens are ``failure``/``runout`` (any case) or ``1``/``0``.
    Errors carry the 1-based data row number in ``DataError.row``.
    """
    text = source if isinstance(source, str) else source.read()
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise DataError("empty input: expected header stress,cycles,status") from None
    if tuple(h.strip().lower() for h in header) != HEADER:
        raise DataError(f"bad header {header!r}: expected stress,cycles,status", row=0)
    obs = []
    for row_no, row in enumerate(reader, start=1):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 3:
            raise DataError(f"row {row_no}: expected 3 fields, got {len(row)}", row=row_no)
        s_tok, n_tok, st_tok = (c.strip() for c in row)
        try:
            stress, cycles = float(s_tok), float(n_tok)
        except ValueError:
            raise DataError(f"row {row_no}: non-numeric stress or cycles", row=row_no) from None
        status = _STATUS.get(st_tok.lower())
        if status is None:
            raise DataError(f"row {row_no}: unknown status {st_tok!r}", row=row_no)
        if not (math.isfinite(stress) and stress > 0.0):
            raise DataError(f"row {row_no}: stress must be positive, got {s_tok}", row=row_no)
        if not (math.isfinite(cycles) and cycles > 0.0):
            raise DataError(f"row {row_no}: cycles must be positive, got {n_tok}", row=row_no)
        obs.append(Observation(stress, cycles, status))
    return Dataset(tuple(obs), stress_units, cycles_units)


def read_dataset(path, **kwargs) -> Dataset:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as err:
        raise DataError(f"cannot read {path}: {err.strerror or err}") from None
    return parse_dataset(text, **kwargs)


def format_dataset(d: Dataset) -> str:
    """CSV text with 17 significant digits, so parsing it back is exact."""
    lines = [",".join(HEADER)]
    lines += [f"{_g17(o.stress)},{_g17(o.cycles)},{o.status.value}" for o in d.observations]
    return "\n".join(lines) + "\n"


def atomic_write(path, text: str) -> None:
    """Write ``text`` to a temporary file beside ``path`` and rename it into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_dataset(d: Dataset, path) -> None:
    atomic_write(path, format_dataset(d))


def scale_dataset(d: Dataset) -> ScaledDataset:
    """View with stresses divided by the largest stress and cycles by the largest count."""
    if len(d) == 0:
        raise DataError("cannot scale an empty dataset")
    return ScaledDataset(d, d.s_max, d.n_max)


# -- nonparametric estimates ---------------------------------------------------------

class GroupStep(NamedTuple):
    cycles: float
    fraction: float
    censored: int


@dataclass(frozen=True)
class GroupEstimate:
    """Kaplan-Meier fraction failing at one stress level.

    Each step records the failure time, the estimate just after it, and the
    number of runouts since the previous step.  ``n_censored`` counts every
    runout in the group, including those after the last failure.
    """

    stress: float
    steps: tuple[GroupStep, ...]
    n: int
    n_censored: int

    def plotting_positions(self) -> list[tuple[float, float]]:
        """Midpoints between the estimate before and after each step."""
        out, before = [], 0.0
        for s in self.steps:
            out.append((s.cycles, 0.5 * (before + s.fraction)))
            before = s.fraction
        return out


def _group_indices(stress: np.ndarray, rel_tol: float) -> list[np.ndarray]:
    order = np.argsort(stress, kind="stable")
    groups, current = [], [order[0]]
    for i in order[1:]:
        ref = stress[current[0]]
        if abs(stress[i] - ref) <= rel_tol * ref:
            current.append(i)
        else:
            groups.append(np.array(current))
            current = [i]
    groups.append(np.array(current))
    return groups


def group_nonparametric_cdf(d: Dataset, rel_tol: float = 1e-9) -> list[GroupEstimate]:
    """Kaplan-Meier estimates per stress level, lowest stress first.

    Stresses within ``rel_tol`` (relative to the smallest member) form one
    group, reported at their mean.  Runouts tied with a failure are treated
    as surviving past it.
    """
    if len(d) == 0:
        return []
    stress, cycles, failed = d.stress, d.cycles, d.failed
    out = []
    for idx in _group_indices(stress, rel_tol):
        t, f = cycles[idx], failed[idx]
        n = int(idx.size)
        surv, at_risk, pending_cens = 1.0, n, 0
        steps = []
        for time in np.unique(t):
            here = t == time
            deaths = int(np.sum(f & here))
            cens = int(np.sum(~f & here))
            if deaths:
                surv *= 1.0 - deaths / at_risk
                steps.append(GroupStep(float(time), 1.0 - surv, pending_cens))
                pending_cens = 0
            pending_cens += cens
            at_risk -= deaths + cens
        out.append(GroupEstimate(float(np.mean(stress[idx])), tuple(steps), n, int(np.sum(~f))))
    return out


# -- plot series ------------------------------------------------------------------------

class PlotKind(enum.Enum):
    PROBABILITY = "ProbabilityPlot"
    QUANTILE = "QuantileCurve"
    DENSITY = "Density"
    RESIDUAL = "ResidualScatter"


class Axis(NamedTuple):
    name: str
    scale: str
    units: str = ""


class PlotPoint(NamedTuple):
    x: float
    y: float
    group: str | None = None
    censored: bool | None = None


@dataclass(frozen=True)
class PlotSeries:
    kind: PlotKind
    x_axis: Axis
    y_axis: Axis
    points: tuple[PlotPoint, ...]
    annotations: dict = field(default_factory=dict)


def _probability_series(d: Dataset, dist, rel_tol) -> PlotSeries:
    dist = parse_distribution(dist)
    pts = []
    for g in group_nonparametric_cdf(d, rel_tol):
        label = _g17(g.stress)
        for t, frac in g.plotting_positions():
            pts.append(PlotPoint(math.log(t), float(dist.ppf(frac)), label, False))
    return PlotSeries(PlotKind.PROBABILITY, Axis("log cycles", "linear", d.cycles_units),
                      Axis(f"{dist.value} quantile of fraction failing", "linear"), tuple(pts),
                      {"distribution": dist.value})


def _life_q(spec, p, S):
    """Finite life quantile or ``None``."""
    try:
        if isinstance(spec, RflModel):
            return rfl_quantile(spec, p, at_stress=S)
        q = life_quantile(spec, p, S)
    except (RangeError, DomainError):
        return None
    return q.value if q.kind.name == "FINITE" else None


def _quantile_series(spec, probs, s_lo, s_hi, n, units) -> PlotSeries:
    grid = np.exp(np.linspace(math.log(s_lo), math.log(s_hi), n))
    pts, notes = [], {}
    for p in probs:
        label = f"p={p:g}"
        vals = [(S, _life_q(spec, p, S)) for S in grid]
        # keep the finite, strictly decreasing stretch that ends at the top stress
        keep = []
        for S, t in reversed(vals):
            if t is None or (keep and not t > keep[-1][1]):
                break
            keep.append((S, t))
        keep.reverse()
        if len(keep) < len(vals):
            notes[label] = {"finite_range": [keep[0][0], keep[-1][0]] if keep else None,
                            "truncated_at_stress": keep[0][0] if keep else s_hi}
        pts += [PlotPoint(t, S, label, None) for S, t in keep]
    return PlotSeries(PlotKind.QUANTILE, Axis("cycles", "log", units[1]), Axis("stress", "log", units[0]),
                      tuple(pts), notes)


def _density_series(spec, stresses, units) -> PlotSeries:
    pts, notes = [], {}
    for S in stresses:
        label = _g17(S)
        lo = _life_q(spec, 0.001, S)
        hi = _life_q(spec, 0.999, S)
        if lo is None:
            notes[label] = {"skipped": "no finite quantiles"}
            continue
        if hi is None:
            # upper end limited by the probability of never failing
            top = 0.999
            while hi is None and top > 0.002:
                top = 0.001 + 0.5 * (top - 0.001)
                hi = _life_q(spec, top, S)
            notes[label] = {"upper_probability": top}
            if hi is None:
                continue
        t = np.exp(np.linspace(math.log(lo), math.log(hi), 200))
        if isinstance(spec, RflModel):
            dens = rfl_life_pdf(spec, t, S)
        else:
            dens = life_pdf(spec, t, S)
        pts += [PlotPoint(float(a), float(b), label, None) for a, b in zip(t, dens)]
    return PlotSeries(PlotKind.DENSITY, Axis("cycles", "log", units[1]), Axis("density", "linear"),
                      tuple(pts), notes)


def _residual_series(fit, d: Dataset) -> PlotSeries:
    res = residuals(fit, d)
    pts = tuple(PlotPoint(float(s), r.value, None, r.censored) for s, r in zip(d.stress, res))
    return PlotSeries(PlotKind.RESIDUAL, Axis("stress", "log", d.stress_units),
                      Axis("standardized residual", "linear"), pts)


def export_plot_data(request: Iterable[str] | str, data: Dataset | None = None, fit=None, *,
                     probs=(0.01, 0.1, 0.5, 0.9, 0.99), stress_range=None, density_stresses=None,
                     n_points: int = 100, distribution=None, rel_tol: float = 1e-9) -> list[PlotSeries]:
    """Build plot-ready series.

    ``request`` names any of ``probability``, ``quantile``, ``density`` and
    ``residuals``.  All but ``probability`` need a fit (a :class:`FittedModel`
    or a model).  Quantile curves are cut where they stop being finite and
    decreasing; the cut is recorded in the series annotations.
    """
    kinds = [request] if isinstance(request, str) else list(request)
    spec = getattr(fit, "spec", fit)
    units = (data.stress_units, data.cycles_units) if data is not None else ("", "cycles")
    out = []
    for kind in kinds:
        if kind != "probability" and spec is None:
            raise ValueError(f"{kind} series need a fitted model")
        if kind in ("probability", "residuals") and data is None:
            raise ValueError(f"{kind} series need a dataset")
        if kind == "probability":
            dist = distribution or (spec.dist if isinstance(spec, ModelSpec) else
                                    spec.dist_life if isinstance(spec, RflModel) else "normal")
            out.append(_probability_series(data, dist, rel_tol))
        elif kind == "quantile":
            lo, hi = stress_range or (float(data.stress.min()), float(data.stress.max()))
            out.append(_quantile_series(spec, probs, lo, hi, n_points, units))
        elif kind == "density":
            stresses = density_stresses
            if stresses is None and data is None:
                raise ValueError("density series need a dataset or explicit stresses")
            if stresses is None:
                stresses = sorted({float(g.stress) for g in group_nonparametric_cdf(data, rel_tol)})
            out.append(_density_series(spec, stresses, units))
        elif kind == "residuals":
            out.append(_residual_series(fit, data))
        else:
            raise ValueError(f"unknown plot request {kind!r}")
    return out


def series_to_csv(series: PlotSeries) -> str:
    lines = ["x,y,group,censored"]
    for p in series.points:
        group = "" if p.group is None else p.group
        cens = "" if p.censored is None else str(bool(p.censored)).lower()
        lines.append(f"{_g17(p.x)},{_g17(p.y)},{group},{cens}")
    return "\n".join(lines) + "\n"


def _series_dict(s: PlotSeries) -> dict:
    return {
        "kind": s.kind.value,
        "x_axis": s.x_axis._asdict(),
        "y_axis": s.y_axis._asdict(),
        "annotations": s.annotations,
        "points": [p._asdict() for p in s.points],
    }


def series_to_json(series: list[PlotSeries]) -> str:
    return json.dumps({"series": [_series_dict(s) for s in series]}, indent=1) + "\n"


# -- fit records ---------------------------------------------------------------------

def fit_record(fit: FittedModel, seed=None) -> dict:
    """Self-describing dictionary for a fit; see :func:`dumps_fit_record`."""
    param = fit.parameterization
    data = fit.data.original
    rec = {
        "format": RECORD_FORMAT,
        "family": param.family,
        "orientation": param.orientation.value,
        "distribution": param.dist.value,
        "spread": param.spread,
        "natural_params": dict(fit.natural_params),
        "standard_errors": dict(fit.standard_errors),
        "stable_params": dict(zip(param.names, map(float, fit.stable_params))),
        "hessian": [list(map(float, row)) for row in np.asarray(fit.hessian)],
        "anchors": param.anchors.as_dict(),
        "scaling": {"s_max": fit.scaling[0], "n_max": fit.scaling[1]},
        "loglik": fit.loglik,
        "converged": fit.converged,
        "iterations": fit.iterations,
        "gradient_norm": fit.gradient_norm,
        "flags": list(fit.flags),
        "n_obs": len(data),
        "n_failures": data.n_failures,
        "units": {"stress": data.stress_units, "cycles": data.cycles_units},
        "dataset_digest": data.digest(),
        "seed": seed,
    }
    if param.family == "rfl":
        rec["distribution_gamma"] = param.dist_gamma.value
    return rec


def dumps_fit_record(record: dict) -> str:
    """JSON text; floats use the shortest repr, which parses back to the same double."""
    return json.dumps(record, indent=1, allow_nan=True) + "\n"


def loads_fit_record(text: str) -> dict:
    rec = json.loads(text)
    if rec.get("format") != RECORD_FORMAT:
        raise DataError(f"not a fit record (format {rec.get('format')!r})")
    return rec


def fitted_from_record(record: dict, data: Dataset | None = None) -> FittedModel:
    """Rebuild a :class:`FittedModel` from a record.

    Without ``data`` the result supports point estimates and Wald intervals
    but not likelihood evaluation.
    """
    param = Parameterization(record["family"], record["orientation"], record["distribution"],
                             record["spread"], Anchors(**record["anchors"]),
                             dist_gamma=record.get("distribution_gamma"))
    theta = np.array([record["stable_params"][k] for k in param.names], dtype=float)
    s_max, n_max = record["scaling"]["s_max"], record["scaling"]["n_max"]
    scaled = ScaledDataset(data, s_max, n_max) if data is not None else None
    spec = param.from_stable(theta).change_units(s_max, n_max)
    return FittedModel(
        spec=spec,
        stable_params=theta,
        natural_params=dict(record["natural_params"]),
        loglik=record["loglik"],
        hessian=np.array(record["hessian"], dtype=float),
        converged=record["converged"],
        iterations=record["iterations"],
        scaling=(s_max, n_max),
        parameterization=param,
        data=scaled,
        standard_errors=dict(record["standard_errors"]),
        gradient_norm=record.get("gradient_norm", math.nan),
        flags=tuple(record.get("flags", ())),
    )
