"""Command-line interface.

Every subcommand accepts ``--config FILE`` with flat ``key = value`` lines
(keys are the long option names, dashes or underscores); explicit flags
override config values.  Exit codes: 0 success, 1 validation failure,
2 usage or I/O error.
"""
from __future__ import annotations

import argparse
import math
import sys
import time

import numpy as np

from . import __version__, densities, microstructure, moments, risk, simulation
from .io import dumps, write_csv
from .model import ModelParams, ParameterError, classify_market
from .validate import emit_figure_data, run_validation

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers: {text!r}") from exc


def _add_model(p):
    g = p.add_argument_group("model parameters")
    g.add_argument("--mu1", type=float, default=0.0)
    g.add_argument("--mu2", type=float, default=None,
                   help="mean-reversion rate (default 0, or set via --nu)")
    g.add_argument("--nu", type=float, default=None,
                   help="degrees of freedom; sets mu2 = (nu-1) sigma2^2 / 2")
    g.add_argument("--sigma1", type=float, default=1.0)
    g.add_argument("--sigma2", type=float, default=1.0)
    g.add_argument("--rho", type=float, default=0.0)


def _add_output(p, default_format):
    p.add_argument("--output", "-o", default=None, help="output file (default stdout)")
    p.add_argument("--format", choices=["csv", "json"], default=default_format)
    p.add_argument("--config", default=None, help="flat key=value config file")


def _add_seed(p):
    p.add_argument("--seed", type=int, default=None,
                   help="random seed (generated and reported when omitted)")


def build_parser():
    parser = argparse.ArgumentParser(prog="hybridbm", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="Monte Carlo sample paths of the SDE")
    _add_model(p)
    p.add_argument("--scheme", choices=[s.value for s in simulation.Scheme], default="euler")
    p.add_argument("--times", type=_floats, default=[1.0],
                   help="comma-separated output times (terminal only for the exact schemes)")
    p.add_argument("--n-paths", type=int, default=10_000)
    p.add_argument("--dt", type=float, default=None)
    _add_seed(p)
    _add_output(p, "csv")

    p = sub.add_parser("density", help="evaluate a density on a grid")
    _add_model(p)
    p.add_argument("--family", choices=["auto"] + [f.value for f in densities.Family],
                   default="auto")
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--xmin", type=float, default=-5.0)
    p.add_argument("--xmax", type=float, default=5.0)
    p.add_argument("--n", type=int, default=501)
    p.add_argument("--method", choices=["gaver-stehfest", "talbot"], default="gaver-stehfest",
                   help="inversion method for the transform family")
    p.add_argument("--order", type=int, default=None, help="inversion order")
    _add_output(p, "csv")

    p = sub.add_parser("moments", help="moments e_0..e_n on a time grid")
    _add_model(p)
    p.add_argument("--order", type=int, default=4)
    p.add_argument("--t-grid", type=_floats, default=[0.0, 0.5, 1.0, 2.0, 5.0])
    p.add_argument("--x0", type=float, default=0.0)
    _add_output(p, "csv")

    p = sub.add_parser("classify", help="market-state classification")
    _add_model(p)
    _add_output(p, "json")

    p = sub.add_parser("var", help="value at risk")
    _add_model(p)
    p.add_argument("--u0", type=float, default=0.01)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--model", choices=[m.value for m in risk.VarModel] + ["all"], default="all")
    _add_output(p, "json")

    p = sub.add_parser("tails", help="standardized tail probabilities")
    p.add_argument("--k", type=float, default=25.0)
    p.add_argument("--family", choices=[f.value for f in risk.TailFamily], default="gaussian")
    p.add_argument("--nu", type=float, default=None)
    p.add_argument("--two-sided", action="store_true")
    p.add_argument("--raw-student", action="store_true",
                   help="do not rescale the Student variable to unit variance")
    _add_output(p, "json")

    p = sub.add_parser("explosion", help="variance explosion table")
    _add_model(p)
    p.add_argument("--t-grid", type=_floats, default=[0.0, 0.1, 0.5, 1.0, 2.0, 5.0])
    p.add_argument("--k", type=float, default=25.0)
    _add_output(p, "csv")

    p = sub.add_parser("microsim", help="discrete trade-arrival simulation")
    p.add_argument("--lambda-buy", type=float, default=1.0)
    p.add_argument("--lambda-sell", type=float, default=1.0)
    p.add_argument("--mu-slope", type=float, default=1.0)
    p.add_argument("--lot-size", type=int, default=1)
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--order-size", choices=[k.value for k in microstructure.OrderSizeKind],
                   default="deterministic")
    p.add_argument("--order-mean", type=float, default=1.0)
    p.add_argument("--horizon", type=float, default=1.0)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--n-paths", type=int, default=10_000)
    _add_seed(p)
    _add_output(p, "json")

    p = sub.add_parser("validate", help="Monte-Carlo-vs-analytic validation suite")
    p.add_argument("--suite", choices=["core", "full"], default="core")
    p.add_argument("--seed", type=int, default=42)
    _add_output(p, "json")

    p = sub.add_parser("figures", help="hybrid vs Gaussian overlay data")
    _add_model(p)
    p.add_argument("--family", choices=[f.value for f in densities.Family], default="nu0")
    p.add_argument("--t-list", type=_floats, default=[0.1, 1.0, 5.0])
    p.add_argument("--xmin", type=float, default=-5.0)
    p.add_argument("--xmax", type=float, default=5.0)
    p.add_argument("--n", type=int, default=1001)
    p.add_argument("--out-dir", default="figures")
    p.add_argument("--config", default=None, help="flat key=value config file")
    return parser, sub.choices


def read_config(path):
    """Parse flat ``key = value`` text; '#' starts a comment."""
    out = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key = value")
        k, v = (s.strip() for s in line.split("=", 1))
        out[k.replace("-", "_")] = v
    return out


def _apply_config(subparser, config):
    actions = {a.dest: a for a in subparser._actions if a.dest not in ("help", "config")}
    defaults = {}
    for key, raw in config.items():
        act = actions.get(key)
        if act is None:
            raise UsageError(f"unknown config key {key!r}")
        if isinstance(act, argparse._StoreTrueAction):
            defaults[key] = raw.lower() in ("1", "true", "yes", "on")
            continue
        try:
            val = act.type(raw) if act.type else raw
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise UsageError(f"bad value for {key}: {raw!r}") from exc
        if act.choices is not None and val not in act.choices:
            raise UsageError(f"{key} must be one of {sorted(act.choices)}")
        defaults[key] = val
    subparser.set_defaults(**defaults)


_FAMILY_NU = {"nu0": 0.0, "chameleon": 2.0, "bimodal": -2.0}


def _model(args, default_nu=None) -> ModelParams:
    """Model parameters from flags; `default_nu` applies when neither
    --mu2 nor --nu is given (density families imply their nu)."""
    if args.nu is not None and args.mu2 is not None:
        raise UsageError("give either --mu2 or --nu, not both")
    nu = args.nu if args.nu is not None or args.mu2 is not None else default_nu
    if nu is not None:
        return ModelParams.from_nu(nu, sigma1=args.sigma1, sigma2=args.sigma2,
                                   mu1=args.mu1, rho=args.rho)
    return ModelParams(mu1=args.mu1, mu2=args.mu2 or 0.0, sigma1=args.sigma1,
                       sigma2=args.sigma2, rho=args.rho)


def _params_dict(p):
    return {"mu1": p.mu1, "mu2": p.mu2, "sigma1": p.sigma1, "sigma2": p.sigma2, "rho": p.rho}


class _Result:
    """Tabular (header, rows) and/or JSON payload produced by a command."""

    def __init__(self, header=None, rows=None, payload=None, ok=True):
        self.header, self.rows, self.payload, self.ok = header, rows, payload, ok


def _cmd_simulate(args):
    p = _model(args)
    seed = simulation.resolve_seed(args.seed)
    scheme = simulation.Scheme(args.scheme)
    times = sorted(args.times)
    if scheme in (simulation.Scheme.Euler, simulation.Scheme.HyperbolicEuler):
        fn = simulation.simulate_euler if scheme is simulation.Scheme.Euler else simulation.simulate_hyperbolic
        ens = fn(p, times, args.n_paths, args.dt, seed)
        grid, data, t_exp = ens.times, ens.paths, ens.explosion_time
    else:
        if len(times) != 1:
            raise UsageError("exact schemes sample a single horizon; give one --times value")
        x = simulation.terminal_samples(p, scheme, times[0], args.n_paths, args.dt, seed)
        grid, data, t_exp = np.array([0.0, times[0]]), np.column_stack([np.zeros_like(x), x]), None
    header = ["path"] + [f"x_t={t:g}" for t in grid]
    rows = [[i] + list(r) for i, r in enumerate(data)]
    if t_exp is not None:
        header.append("explosion_time")
        rows = [r + [te] for r, te in zip(rows, t_exp)]
    summary = {"scheme": scheme.value, "seed": seed, "params": _params_dict(p),
               "times": list(grid), "mean": data.mean(axis=0), "variance": data.var(axis=0, ddof=1),
               "n_exploded": int(np.sum(~np.isnan(t_exp))) if t_exp is not None else 0}
    return _Result(header, rows, summary), seed


def _cmd_density(args):
    p = _model(args, _FAMILY_NU.get(args.family))
    fam = densities.family_for(p) if args.family == "auto" else densities.Family(args.family)
    if args.n < 2 or not args.xmax > args.xmin:
        raise UsageError("need --n >= 2 and --xmax > --xmin")
    x = np.linspace(args.xmin, args.xmax, args.n)
    inv = {"method": args.method}
    if args.order is not None:
        inv["order"] = args.order
    curve = densities.density_curve(fam, x, args.t, p, **inv)
    payload = {"family": fam.value, "t": curve.t, "params": _params_dict(p),
               "x": curve.x_grid, "f": curve.f_values, "mass": curve.mass()}
    return _Result(["x", "f"], np.column_stack([curve.x_grid, curve.f_values]), payload), None


def _cmd_moments(args):
    p = _model(args)
    sol = moments.moment_odes_solve(p, args.order, sorted(args.t_grid), args.x0)
    header = ["t"] + [f"e{n}" for n in range(args.order + 1)] + ["variance"]
    rows = [[mv.t] + list(mv.values) + [mv.variance] for mv in sol]
    payload = {"params": _params_dict(p), "order": args.order,
               "rows": [dict(zip(header, r)) for r in rows]}
    return _Result(header, rows, payload), None


def _cmd_classify(args):
    p = _model(args)
    st = classify_market(p)
    return _Result(list(st.to_dict()), [list(st.to_dict().values())], st.to_dict()), None


def _cmd_var(args):
    p = _model(args)
    models = list(risk.VarModel) if args.model == "all" else [risk.VarModel(args.model)]
    out = {}
    for m in models:
        try:
            res = risk.value_at_risk(risk.VarRequest(args.u0, args.t, p, m))
        except ParameterError as exc:
            if args.model != "all":
                raise
            out[m.value] = {"error": str(exc)}
            continue
        out[m.value] = {"signed": res.signed, "var": res.var}
    rows = [[k, v.get("signed", math.nan), v.get("var", math.nan)] for k, v in out.items()]
    payload = {"u0": args.u0, "t": args.t, "params": _params_dict(p), "results": out}
    return _Result(["model", "signed", "var"], rows, payload), None


def _cmd_tails(args):
    lp = risk.log_tail_probability(args.k, args.family, args.nu, args.two_sided,
                                   not args.raw_student)
    payload = {"k": args.k, "family": args.family, "nu": args.nu, "two_sided": args.two_sided,
               "probability": math.exp(lp), "log10_probability": lp / math.log(10.0)}
    return _Result(list(payload), [list(payload.values())], payload), None


def _cmd_explosion(args):
    p = _model(args)
    table = risk.explosion_report(p, args.t_grid, args.k)
    rows = [[r.t, r.variance, r.explosion_factor, r.k_equivalent] for r in table]
    header = ["t", "variance", "explosion_factor", "k_equivalent"]
    return _Result(header, rows, {"params": _params_dict(p), "k": args.k,
                                  "rows": [dict(zip(header, r)) for r in rows]}), None


def _cmd_microsim(args):
    seed = simulation.resolve_seed(args.seed)
    mp = microstructure.MicrostructureParams(
        lambda_buy=args.lambda_buy, lambda_sell=args.lambda_sell, mu_slope=args.mu_slope,
        lot_size=args.lot_size, omega=args.omega,
        order_size=microstructure.OrderSize(microstructure.OrderSizeKind(args.order_size),
                                            args.order_mean))
    x = microstructure.simulate_discrete_ensemble(mp, args.horizon, args.dt, args.n_paths, seed)
    payload = {"seed": seed, "horizon": args.horizon, "n_paths": args.n_paths,
               "sample_mean": x.mean(), "sample_variance": x.var(ddof=1)}
    try:
        sde = microstructure.map_to_sde(mp)
        mv = moments.moment_odes_solve(sde, 2, [0.0, args.horizon])[-1]
        payload.update(mapped_params=_params_dict(sde), e1=mv.mean, variance=mv.variance)
    except ParameterError as exc:
        payload["mapped_params"] = {"error": str(exc)}
    rows = [[i, v] for i, v in enumerate(x)]
    return _Result(["path", f"x_t={args.horizon:g}"], rows, payload), seed


def _cmd_validate(args):
    rep = run_validation(args.suite, args.seed)
    d = rep.to_dict()
    rows = [[c["name"], c["statistic"], c["threshold"], c["passed"]] for c in d["checks"]]
    res = _Result(["name", "statistic", "threshold", "passed"], rows, d, ok=rep.passed)
    res.wall_time = rep.wall_time
    return res, args.seed


def _cmd_figures(args):
    p = _model(args, _FAMILY_NU.get(args.family))
    grid = np.linspace(args.xmin, args.xmax, args.n)
    paths = emit_figure_data(args.out_dir, args.family, p, args.t_list, grid)
    return _Result(None, None, {"files": paths}), None


COMMANDS = {"simulate": _cmd_simulate, "density": _cmd_density, "moments": _cmd_moments,
            "classify": _cmd_classify, "var": _cmd_var, "tails": _cmd_tails,
            "explosion": _cmd_explosion, "microsim": _cmd_microsim,
            "validate": _cmd_validate, "figures": _cmd_figures}


def _emit(args, result):
    fmt = getattr(args, "format", "json")
    out = getattr(args, "output", None)
    fh = open(out, "w", newline="") if out else sys.stdout
    try:
        if fmt == "csv" and result.header is not None:
            write_csv(fh, result.header, result.rows)
        else:
            fh.write(dumps(result.payload) + "\n")
    finally:
        if out:
            fh.close()


def _meta(args, seed, wall):
    opts = {k: v for k, v in vars(args).items() if k not in ("command",)}
    return {"command": args.command, "options": opts, "seed": seed,
            "version": __version__, "wall_time_s": wall}


def main(argv=None):
    parser, subparsers = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "config", None):
            _apply_config(subparsers[args.command], read_config(args.config))
            args = parser.parse_args(argv)
        start = time.perf_counter()
        result, seed = COMMANDS[args.command](args)
        if seed is not None and getattr(args, "seed", None) is None:
            print(f"seed: {seed}", file=sys.stderr)
        _emit(args, result)
        meta = dumps(_meta(args, seed, getattr(result, "wall_time", time.perf_counter() - start)))
        out = getattr(args, "output", None)
        if out:
            with open(out + ".meta.json", "w") as fh:
                fh.write(meta + "\n")
        else:
            print(meta.replace("\n", " "), file=sys.stderr)
    except (UsageError, OSError, ValueError, ArithmeticError) as exc:
        print(f"hybridbm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK if result.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
