"""Command-line front end: ``fnig <subcommand> [options]``.

Exit codes: 0 success, 1 validation checks failed, 2 usage or parameter
error, 3 numerical failure. Every table carries the parameters, seed and
tool version in its metadata.
"""

import argparse
import math
import os
import sys

import numpy as np

from . import __version__
from .analytics import abs_moment, fnig_cov, fnig_density, kurtosis, standardized_density
from .errors import DomainError, FactorizationError, QuadratureError
from .fbm import fbm_cov
from .nfnig import nfnig_cov, nfnign_cov, subordinated_lag_nfgn_cov
from .noise import lamperti_cov, lrd_asymptote, noise_acf
from .params import FbmParams, FnigParams, NFnigParams, NoiseParams
from .simulate import simulate_fnig_path, uniform_grid
from .streams import substream
from .tables import csv_text, json_text
from .validate import PRESETS, McConfig, build_report, estimate_noise_acf, noise_paths

SEED_ENV = "FNIG_SEED"
RANGE_FLAGS = ("--x-range", "--t-range")

EXIT_OK, EXIT_CHECKS_FAILED, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def parse_range(text: str) -> np.ndarray:
    """``start:stop:step`` -> start, start + step, ... up to stop (inclusive within rounding)."""
    try:
        start, stop, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise UsageError(f"range {text!r} must look like start:stop:step") from None
    if not step > 0 or stop < start:
        raise UsageError(f"range {text!r} needs step > 0 and stop >= start")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(count)


def parse_values(text: str) -> np.ndarray:
    try:
        return np.array([float(v) for v in text.split(",") if v.strip()])
    except ValueError:
        raise UsageError(f"could not parse value list {text!r}") from None


def _grid(args, name="t") -> np.ndarray:
    rng_text = getattr(args, f"{name}_range")
    values = getattr(args, f"{name}_values", None)
    if rng_text and values:
        raise UsageError(f"--{name}-range and --{name}-values are mutually exclusive")
    if values:
        return parse_values(values)
    if rng_text:
        return parse_range(rng_text)
    raise UsageError(f"one of --{name}-range or --{name}-values is required")


def _default_seed() -> int:
    env = os.environ.get(SEED_ENV)
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={env!r} is not an integer") from None


def _seed(args) -> int:
    return args.seed if args.seed is not None else _default_seed()


def _fnig_params(args) -> FnigParams:
    return FnigParams(args.alpha, args.beta, args.sigma2, args.H)


def _emit(args, columns: dict, metadata: dict) -> None:
    if args.format == "json":
        text = json_text({"columns": columns}, metadata)
    else:
        text = csv_text(columns, metadata)
    _write(args, text)


def _write(args, text: str) -> None:
    if args.output:
        with open(args.output, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# subcommands


def cmd_simulate(args) -> int:
    p = _fnig_params(args)
    seed = _seed(args)
    grid = uniform_grid(args.t_max, args.n_steps)
    path = simulate_fnig_path(p, grid, substream(seed, 0), seed=seed, index=(0,))
    _write(args, path.to_json() if args.format == "json" else path.to_csv())
    return EXIT_OK


def cmd_density(args) -> int:
    p = _fnig_params(args)
    x = parse_range(args.x_range)
    if args.standardize:
        f = standardized_density(x, args.t, p)
        normal = np.exp(-0.5 * x * x) / math.sqrt(2 * math.pi)
    else:
        f = fnig_density(x, args.t, p)
        var = abs_moment(2, args.t, p) if p.beta > 0 else math.nan
        normal = np.exp(-0.5 * x * x / var) / math.sqrt(2 * math.pi * var)
    meta = {"params": p.to_dict(), "seed": None, "t": args.t, "standardized": args.standardize}
    _emit(args, {"x": x, "density": f, "normal_density": normal}, meta)
    return EXIT_OK


def cmd_moments(args) -> int:
    p = _fnig_params(args)
    t = _grid(args)
    cols = {"t": t}
    for q in parse_values(args.q):
        cols[f"abs_moment_q{q:g}"] = np.array([abs_moment(q, v, p) for v in t])
    cols["kurtosis"] = kurtosis(t, p)
    _emit(args, cols, {"params": p.to_dict(), "seed": None})
    return EXIT_OK


def cmd_cov(args) -> int:
    p = _fnig_params(args)
    t = _grid(args)
    cov = fnig_cov(t, args.s, p)
    fbm = fbm_cov(t, args.s, FbmParams(p.H, p.sigma2))
    ratio = np.where(fbm != 0, cov / np.where(fbm != 0, fbm, 1.0), np.nan)
    _emit(args, {"t": t, "fnig_cov": cov, "fbm_cov": fbm, "ratio": ratio},
          {"params": p.to_dict(), "seed": None, "s": args.s})
    return EXIT_OK


def cmd_acf(args) -> int:
    p = _fnig_params(args)
    np_ = NoiseParams(args.eta, p)
    k = np.arange(args.max_lag + 1)
    cols = {
        "k": k,
        "gamma_analytic": noise_acf(k, np_),
        "gamma_asymptote": np.concatenate(([math.nan], lrd_asymptote(k[1:], np_))) if k.size > 1 else [math.nan],
    }
    seed = _seed(args)
    if args.mc_replicates:
        cfg = McConfig(replicates=2, path_length=args.mc_steps, seed=seed, path_replicates=args.mc_replicates)
        paths = noise_paths(np_, cfg, substream(seed, 1))
        est = [estimate_noise_acf(int(j), np_, cfg, paths=paths) for j in k]
        cols["gamma_mc"] = [e[0] for e in est]
        cols["mc_se"] = [e[1] for e in est]
    meta = {"params": p.to_dict(), "eta": args.eta, "seed": seed if args.mc_replicates else None,
            "mc_replicates": args.mc_replicates, "mc_steps": args.mc_steps}
    _emit(args, cols, meta)
    return EXIT_OK


def cmd_lamperti(args) -> int:
    p = _fnig_params(args)
    np_ = NoiseParams(args.eta, p)
    t = _grid(args)
    _emit(args, {"t": t, "cov": lamperti_cov(t, args.s, np_)},
          {"params": p.to_dict(), "eta": args.eta, "s": args.s, "seed": None})
    return EXIT_OK


def cmd_nfnig(args) -> int:
    p = NFnigParams(args.n, args.alpha, args.beta, args.H, args.eta)
    meta = {"params": {"n": p.n, "alpha": p.alpha, "beta": p.beta, "H": p.H, "eta": p.eta}, "seed": None}
    if args.table == "cov":
        if args.s is None:
            raise UsageError("--s is required for --table cov")
        t = _grid(args)
        meta["s"] = args.s
        _emit(args, {"t": t, "cov": nfnig_cov(t, args.s, p)}, meta)
    else:
        lags = np.arange(1, args.max_lag + 1, dtype=float) * p.eta
        cols = {"tau": lags, "increment_cov": [nfnign_cov(v, p) for v in lags]}
        if args.subordinated_lag:
            cols["subordinated_lag_cov"] = [subordinated_lag_nfgn_cov(v, p) for v in lags]
        _emit(args, cols, meta)
    return EXIT_OK


def cmd_validate(args) -> int:
    preset = PRESETS[args.preset]
    overrides = {k: v for k, v in (("replicates", args.replicates), ("path_length", args.path_length),
                                   ("path_replicates", args.path_replicates)) if v is not None}
    cfg = McConfig(seed=_seed(args), tolerance_sigmas=args.tolerance, **{**preset["config"], **overrides})
    checks = args.checks.split(",") if args.checks else preset["checks"]
    report = build_report(checks, cfg, preset["params"], eta=1.0)
    _write(args, report.text_table() if args.format == "text" else report.to_json())
    return EXIT_OK if report.passed else EXIT_CHECKS_FAILED


# parser


def _add_theta(sp, beta_min="> 0", sigma2=True):
    g = sp.add_argument_group("parameters theta = (alpha, beta, sigma2, H)")
    g.add_argument("--alpha", type=float, required=True, help="IG rate, alpha > 0")
    g.add_argument("--beta", type=float, required=True,
                   help=f"IG drift, beta {beta_min}" + (" (beta = 0 requires H = 1/2)" if beta_min == ">= 0" else ""))
    if sigma2:
        g.add_argument("--sigma2", type=float, default=1.0, help="FBM variance scale, sigma2 > 0 (default 1)")
    g.add_argument("--H", type=float, required=True, help="Hurst index, 0 < H < 1")


def _add_output(sp, formats=("csv", "json"), default="csv"):
    sp.add_argument("--format", choices=formats, default=default, help=f"output format (default {default})")
    sp.add_argument("--output", "-o", help="write to this file instead of stdout")


def _add_seed(sp):
    sp.add_argument("--seed", type=int, default=None,
                    help=f"integer seed; defaults to ${SEED_ENV}, else 0 (the flag wins over the variable)")


def _add_t_grid(sp):
    sp.add_argument("--t-range", help="times as start:stop:step (inclusive)")
    sp.add_argument("--t-values", help="times as a comma-separated list")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fnig", description="Fractional normal inverse Gaussian process toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="subcommand")

    sp = sub.add_parser("simulate", help="simulate one path (t, G, X) on a uniform grid")
    _add_theta(sp)
    sp.add_argument("--n-steps", type=int, required=True, help="number of grid steps, >= 1")
    sp.add_argument("--t-max", type=float, required=True, help="final time, > 0")
    _add_seed(sp)
    _add_output(sp)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("density", help="marginal density of X(t) on an x grid")
    _add_theta(sp, beta_min=">= 0")
    sp.add_argument("--t", type=float, required=True, help="time, > 0")
    sp.add_argument("--x-range", required=True, help="x grid as start:stop:step")
    sp.add_argument("--standardize", action="store_true",
                    help="density of X(t) / sd(X(t)), compared with the standard normal")
    _add_output(sp)
    sp.set_defaults(func=cmd_density)

    sp = sub.add_parser("moments", help="absolute moments and kurtosis against t")
    _add_theta(sp)
    _add_t_grid(sp)
    sp.add_argument("--q", default="2,4", help="comma-separated moment orders q >= 0 (default 2,4)")
    _add_output(sp)
    sp.set_defaults(func=cmd_moments)

    sp = sub.add_parser("cov", help="E X(t) X(s) against t, next to the FBM covariance")
    _add_theta(sp)
    _add_t_grid(sp)
    sp.add_argument("--s", type=float, required=True, help="fixed second time, s >= 0")
    _add_output(sp)
    sp.set_defaults(func=cmd_cov)

    sp = sub.add_parser("acf", help="noise autocovariance: exact, large-lag asymptote, optional Monte Carlo")
    _add_theta(sp)
    sp.add_argument("--eta", type=float, default=1.0, help="increment step, eta > 0 (default 1)")
    sp.add_argument("--max-lag", type=int, default=20, help="largest lag k >= 0 (default 20)")
    sp.add_argument("--mc-replicates", type=int, default=0, help="simulated paths, 0 disables Monte Carlo, else >= 2")
    sp.add_argument("--mc-steps", type=int, default=2000, help="noise values per path, > max-lag + 1 (default 2000)")
    _add_seed(sp)
    _add_output(sp)
    sp.set_defaults(func=cmd_acf)

    sp = sub.add_parser("lamperti", help="covariance of t^H Y(ln t) against t at fixed s")
    _add_theta(sp)
    sp.add_argument("--eta", type=float, default=1.0, help="increment step, eta > 0 (default 1)")
    _add_t_grid(sp)
    sp.add_argument("--s", type=float, required=True, help="fixed second time, s > 0")
    _add_output(sp)
    sp.set_defaults(func=cmd_lamperti)

    sp = sub.add_parser("nfnig", help="n-th order FNIG covariance tables")
    sp.add_argument("--n", type=int, required=True, help="order n >= 1")
    sp.add_argument("--alpha", type=float, required=True, help="IG rate, alpha > 0")
    sp.add_argument("--beta", type=float, required=True, help="IG drift, beta > 0")
    sp.add_argument("--H", type=float, required=True, help="Hurst index, n - 1 < H < n, not an integer")
    sp.add_argument("--eta", type=float, default=1.0, help="increment step, eta > 0 (default 1)")
    sp.add_argument("--table", choices=("cov", "noise"), default="cov",
                    help="cov: E X(t) X(s) against t; noise: n-th order increment covariance against lag")
    _add_t_grid(sp)
    sp.add_argument("--s", type=float, help="fixed second time for --table cov, s >= 0")
    sp.add_argument("--max-lag", type=int, default=10, help="lags 1..max-lag (in units of eta) for --table noise")
    sp.add_argument("--subordinated-lag", action="store_true",
                    help="also tabulate the fGn covariance with the lag replaced by G(tau)")
    _add_output(sp)
    sp.set_defaults(func=cmd_nfnig)

    sp = sub.add_parser("validate", help="run the Monte Carlo validation suite")
    sp.add_argument("--preset", choices=sorted(PRESETS), default="default", help="check set and sizes")
    sp.add_argument("--checks", help="comma-separated subset of check names")
    sp.add_argument("--replicates", type=int, help="override draws per check, >= 2")
    sp.add_argument("--path-length", type=int, help="override noise values per path, >= 2")
    sp.add_argument("--path-replicates", type=int, help="override number of simulated paths, >= 2")
    sp.add_argument("--tolerance", type=float, default=3.0, help="pass threshold on |z| (default 3)")
    _add_seed(sp)
    _add_output(sp, formats=("json", "text"), default="json")
    sp.set_defaults(func=cmd_validate)
    return parser


def _join_range_values(argv: list) -> list:
    # argparse would read "-5:5:0.01" as an option; bind it to its flag
    out = []
    i = 0
    while i < len(argv):
        if argv[i] in RANGE_FLAGS and i + 1 < len(argv):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(_join_range_values(argv))
    try:
        return args.func(args)
    except (UsageError, DomainError) as exc:
        print(f"fnig {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FactorizationError, QuadratureError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"fnig {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
