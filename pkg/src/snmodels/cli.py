"""Command-line interface: ``snmodels <subcommand> ...``.

Exit codes: 0 success, 2 data error, 3 non-convergence, 4 unattainable
query, 5 fit record does not match the dataset.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
import warnings
from pathlib import Path

from . import data_io
from .errors import DataError, DomainError, FitError, RangeError
from .extended import RflModel
from .inference import (
    Query,
    fit_mle,
    profile_lr_ci,
    residual_summary,
    residuals,
    simulate_dataset,
    wald_ci,
)
from .models import ModelSpec, atom_probability
from .relationships import family_class, relationship_from_params

EXIT_OK, EXIT_DATA, EXIT_CONVERGENCE, EXIT_UNATTAINABLE, EXIT_DIGEST = 0, 2, 3, 4, 5
OUTPUT_DIR_ENV = "SNMODELS_OUTPUT_DIR"


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _out_path(arg, default_name: str) -> Path:
    if arg:
        return Path(arg)
    return Path(os.environ.get(OUTPUT_DIR_ENV, ".")) / default_name


def _g(x) -> str:
    return "%.10g" % x


def _load_fit(args, need_data: bool):
    try:
        record = data_io.loads_fit_record(Path(args.fit).read_text(encoding="utf-8"))
    except OSError as err:
        raise CliError(f"cannot read fit record {args.fit}: {err.strerror}", EXIT_DATA) from None
    except ValueError as err:
        raise CliError(f"bad fit record {args.fit}: {err}", EXIT_DATA) from None
    data = None
    if getattr(args, "data", None):
        data = data_io.read_dataset(args.data)
        if data.digest() != record["dataset_digest"]:
            raise CliError(f"dataset {args.data} does not match the data the fit was made on", EXIT_DIGEST)
    elif need_data:
        raise CliError("this command needs --data", EXIT_DATA)
    return record, data_io.fitted_from_record(record, data), data


# -- subcommands -------------------------------------------------------------------

def cmd_fit(args) -> int:
    data = data_io.read_dataset(args.data, stress_units=args.stress_units)
    rel = args.relationship
    if rel != "rfl":
        rec = family_class(rel).recommended_orientation
        if args.orientation and rec != "either" and args.orientation != rec:
            print(f"warning: {rel} is usually specified for {rec}; fitting the {args.orientation} "
                  f"orientation as requested", file=sys.stderr)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        fit = fit_mle(data, rel, args.distribution, args.orientation, args.spread)
    record = data_io.fit_record(fit, seed=args.seed)
    out = _out_path(args.output, f"{Path(args.data).stem}.{fit.family}.fit.json")
    data_io.atomic_write(out, data_io.dumps_fit_record(record))
    print(f"model: {fit.family} / {fit.parameterization.dist.value} / "
          f"{fit.parameterization.orientation.value} / {fit.parameterization.spread} spread")
    print(f"{'parameter':<16}{'estimate':>20}{'std. error':>20}")
    for k, v in fit.natural_params.items():
        se = fit.standard_errors.get(k, math.nan)
        print(f"{k:<16}{_g(v):>20}{_g(se):>20}")
    print(f"loglik: {fit.loglik:.10g}")
    print(f"converged: {'yes' if fit.converged else 'no'} (gradient norm {fit.gradient_norm:.3g})")
    for flag in fit.flags:
        print(f"note: {flag}")
    if fit.equivalent_fit is not None:
        print(f"note: rectangular-hyperbola limit fits equally well "
              f"(loglik {fit.equivalent_fit.loglik:.10g})")
    print(f"fit record: {out}")
    return EXIT_OK if fit.converged or "flat_qlogisp" in fit.flags else EXIT_CONVERGENCE


def _query_from_args(args, quantile: bool) -> Query:
    if (args.at_stress is None) == (args.at_cycles is None):
        raise CliError("give exactly one of --at-stress or --at-cycles", EXIT_DATA)
    if quantile:
        if not 0.0 < args.p < 1.0:
            raise CliError("--p must lie strictly between 0 and 1", EXIT_DATA)
        if args.at_stress is not None:
            return Query.life_quantile(args.p, args.at_stress)
        return Query.strength_quantile(args.p, args.at_cycles)
    if args.at_stress is not None:
        return Query.life_probability(args.value, args.at_stress)
    return Query.strength_probability(args.value, args.at_cycles)


def _interval(fit, query, args):
    if args.interval == "none":
        return None
    if args.interval == "profile":
        if fit.data is None:
            raise CliError("profile intervals need --data", EXIT_DATA)
        return profile_lr_ci(fit, query, args.level)
    try:
        return wald_ci(fit, query, args.level)
    except FitError as err:
        print(f"warning: {err}", file=sys.stderr)
        return None


def _print_interval(iv, level):
    if iv is None:
        return
    lo = _g(iv.lower) if iv.lower_bounded else f"unbounded ({_g(iv.lower)})"
    hi = _g(iv.upper) if iv.upper_bounded else f"unbounded ({_g(iv.upper)})"
    print(f"{level:.0%} {iv.method} interval: [{lo}, {hi}]")
    print(f"one-sided {iv.one_sided_level:.1%} lower bound: {lo}")


def _atom(spec, query) -> float:
    if isinstance(spec, ModelSpec):
        if query.kind == "life_quantile" and not spec.is_life:
            return float(atom_probability(spec, query.at))
        if query.kind == "strength_quantile" and spec.is_life:
            return float(atom_probability(spec, query.at))
        if query.kind == "life_quantile" and spec.is_life:
            return 1.0
    if isinstance(spec, RflModel) and query.kind == "life_quantile":
        return 1.0 - float(spec.gamma_cdf(query.at))
    return math.nan


def cmd_quantile(args) -> int:
    record, fit, _ = _load_fit(args, need_data=False)
    query = _query_from_args(args, quantile=True)
    try:
        v = query.evaluate(fit.spec)
    except DomainError as err:
        raise CliError(str(err), EXIT_DATA) from None
    if not math.isfinite(v):
        print(f"{query.describe()}: unbounded (atom={_atom(fit.spec, query):.6g})")
        return EXIT_UNATTAINABLE
    print(f"{query.describe()}: {_g(v)}")
    _print_interval(_interval(fit, query, args), args.level)
    return EXIT_OK


def cmd_probability(args) -> int:
    record, fit, _ = _load_fit(args, need_data=False)
    query = _query_from_args(args, quantile=False)
    v = query.evaluate(fit.spec)
    print(f"{query.describe()}: {_g(v)}")
    _print_interval(_interval(fit, query, args), args.level)
    return EXIT_OK


def cmd_residuals(args) -> int:
    record, fit, data = _load_fit(args, need_data=True)
    res = residuals(fit, data)
    lines = ["stress,cycles,status,residual,censored"]
    for o, r in zip(data.observations, res):
        lines.append(f"{o.stress!r},{o.cycles!r},{o.status.value},{'%.17g' % r.value},{str(r.censored).lower()}")
    out = _out_path(args.output, f"{Path(args.data).stem}.{record['family']}.residuals.csv")
    data_io.atomic_write(out, "\n".join(lines) + "\n")
    print(f"{len(res)} residuals written to {out}")
    return EXIT_OK


def cmd_plotdata(args) -> int:
    fit = None
    data = data_io.read_dataset(args.data) if args.data else None
    if args.fit:
        _, fit, data = _load_fit(args, need_data=False)
    kinds = args.kind or ["probability"]
    try:
        series = data_io.export_plot_data(kinds, data=data, fit=fit, distribution=args.distribution)
    except ValueError as err:
        raise CliError(str(err), EXIT_DATA) from None
    stem = Path(args.data).stem if args.data else "model"
    if args.format == "json":
        out = _out_path(args.output, f"{stem}.plotdata.json")
        data_io.atomic_write(out, data_io.series_to_json(series))
        print(f"{len(series)} series written to {out}")
    else:
        outdir = _out_path(args.output, "")
        for s in series:
            path = outdir / f"{stem}.{s.kind.value}.csv"
            data_io.atomic_write(path, data_io.series_to_csv(s))
            print(f"{s.kind.value}: {path}")
    return EXIT_OK


def _parse_design(text: str):
    design = []
    for part in text.split(","):
        try:
            s, n = part.split(":")
            design.append((float(s), int(n)))
        except ValueError:
            raise CliError(f"bad design entry {part!r}; expected stress:count", EXIT_DATA) from None
    return design


def _parse_params(items):
    out = {}
    for item in items or []:
        try:
            k, v = item.split("=")
            out[k.strip()] = float(v)
        except ValueError:
            raise CliError(f"bad parameter {item!r}; expected name=value", EXIT_DATA) from None
    return out


def cmd_simulate(args) -> int:
    if args.fit:
        _, fit, _ = _load_fit(args, need_data=False)
        spec = fit.spec
    else:
        params = _parse_params(args.param)
        try:
            if args.relationship == "rfl":
                spec = RflModel(**params, dist_life=args.distribution, dist_gamma=args.distribution)
            else:
                rel_names = family_class(args.relationship).param_names()
                rel = relationship_from_params(args.relationship, {k: params[k] for k in rel_names})
                if args.spread == "loglinear":
                    from .models import LogLinearSpread
                    spread = LogLinearSpread(params["sigma_b0"], params["sigma_b1"])
                else:
                    spread = params["sigma"]
                orientation = args.orientation or family_class(args.relationship).recommended_orientation
                if orientation == "either":
                    orientation = "life"
                spec = ModelSpec(orientation, rel, args.distribution, spread)
        except (KeyError, TypeError, ValueError) as err:
            raise CliError(f"invalid model parameters: {err}", EXIT_DATA) from None
    d = simulate_dataset(spec, _parse_design(args.design), args.censor_at, args.seed)
    out = _out_path(args.output, f"simulated_{args.seed}.csv")
    data_io.write_dataset(d, out)
    print(f"{len(d)} observations ({d.n_failures} failures) written to {out}")
    return EXIT_OK


def cmd_compare(args) -> int:
    data = data_io.read_dataset(args.data)
    rows = []
    for path in args.fits:
        args.fit = path
        record, fit, _ = _load_fit(args, need_data=True)
        summ = residual_summary(residuals(fit, data))
        rows.append((Path(path).name, record["family"], record["orientation"], fit.loglik, fit.n_params,
                     summ["sd"], summ["max_abs"]))
    print(f"{'fit':<32}{'family':<20}{'orientation':<12}{'loglik':>14}{'k':>4}{'AIC':>14}"
          f"{'resid sd':>10}{'max|r|':>10}")
    for name, fam, ori, ll, k, sd, mx in rows:
        print(f"{name:<32}{fam:<20}{ori:<12}{ll:>14.6f}{k:>4}{2 * k - 2 * ll:>14.6f}{sd:>10.4f}{mx:>10.4f}")
    return EXIT_OK


# -- parser ------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="snmodels", description="Fit and query statistical S-N models.")
    sub = p.add_subparsers(dest="command", required=True)

    def model_flags(sp):
        sp.add_argument("--relationship", required=True,
                        help="basquin, stromeyer, boxcox, coffin_manson, nishijima, rect_hyperbola, "
                             "modified_bastenaire or rfl")
        sp.add_argument("--distribution", default="lognormal", help="lognormal/normal or weibull/sev")
        sp.add_argument("--orientation", choices=["life", "strength"])
        sp.add_argument("--spread", choices=["constant", "loglinear"], default="constant")

    def query_flags(sp):
        sp.add_argument("--fit", required=True, help="fit record JSON")
        sp.add_argument("--data", help="dataset CSV (checked against the record; needed for profile intervals)")
        sp.add_argument("--at-stress", type=float)
        sp.add_argument("--at-cycles", type=float)
        sp.add_argument("--interval", choices=["wald", "profile", "none"], default="wald")
        sp.add_argument("--level", type=float, default=0.95)

    f = sub.add_parser("fit", help="fit a model by maximum likelihood")
    f.add_argument("--data", required=True)
    model_flags(f)
    f.add_argument("--stress-units", default="")
    f.add_argument("--seed", type=int, help="recorded in the fit record")
    f.add_argument("--output")
    f.set_defaults(func=cmd_fit)

    q = sub.add_parser("quantile", help="life or strength quantile with an interval")
    query_flags(q)
    q.add_argument("--p", type=float, required=True)
    q.set_defaults(func=cmd_quantile)

    pr = sub.add_parser("probability", help="failure probability with an interval")
    query_flags(pr)
    pr.add_argument("--value", type=float, required=True,
                    help="cycles (with --at-stress) or stress (with --at-cycles)")
    pr.set_defaults(func=cmd_probability)

    r = sub.add_parser("residuals", help="standardized residuals as CSV")
    r.add_argument("--fit", required=True)
    r.add_argument("--data", required=True)
    r.add_argument("--output")
    r.set_defaults(func=cmd_residuals)

    pd = sub.add_parser("plotdata", help="plot-ready series")
    pd.add_argument("--data")
    pd.add_argument("--fit")
    pd.add_argument("--kind", action="append", choices=["probability", "quantile", "density", "residuals"])
    pd.add_argument("--distribution", help="kernel for probability plots without a fit")
    pd.add_argument("--format", choices=["csv", "json"], default="csv")
    pd.add_argument("--output", help="JSON file, or directory for CSV series")
    pd.set_defaults(func=cmd_plotdata)

    s = sub.add_parser("simulate", help="simulate a censored dataset")
    s.add_argument("--fit", help="simulate from a fit record instead of explicit parameters")
    s.add_argument("--relationship", default="basquin")
    s.add_argument("--distribution", default="lognormal")
    s.add_argument("--orientation", choices=["life", "strength"])
    s.add_argument("--spread", choices=["constant", "loglinear"], default="constant")
    s.add_argument("--param", action="append", help="name=value, repeatable")
    s.add_argument("--design", required=True, help="stress:count,stress:count,...")
    s.add_argument("--censor-at", type=float, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--output")
    s.set_defaults(func=cmd_simulate)

    c = sub.add_parser("compare", help="compare fit records on one dataset")
    c.add_argument("--data", required=True)
    c.add_argument("fits", nargs="+")
    c.set_defaults(func=cmd_compare)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as err:
        print(f"error: {err}", file=sys.stderr)
        return err.code
    except DataError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_DATA
    except FitError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except RangeError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_UNATTAINABLE


if __name__ == "__main__":
    sys.exit(main())
