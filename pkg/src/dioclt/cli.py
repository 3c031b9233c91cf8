"""Command-line entry point for reproducible counting / constants / CLT experiments.

All floating-point output is printed with 17 significant digits so that
repeated runs are byte-identical and values round-trip exactly.  Exit codes:
0 success, 1 statistical-check failure, 2 validation error, 3 resource budget,
4 I/O error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import constants as const_mod
from . import counting, montecarlo, stats
from .config import ConfigError, norm_to_str, parse_config_text, parse_norm
from .counting import ResourceBudgetError
from .model import (
    ApproximationProblem,
    MODE_INHOMOGENEOUS,
    Q_LOWER_EXCLUSIVE0,
    SamplePoint,
    ValidationError,
    validate,
)
from .montecarlo import CENTER_EMPIRICAL, CENTER_THEOREM, SimulationConfig

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_STAT_FAIL = 1
EXIT_VALIDATION = 2
EXIT_RESOURCE = 3
EXIT_IO = 4


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _to_json(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt(obj)
    if isinstance(obj, str):
        return '"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        inner = ",\n".join(
            f'{pad}  "{k}": {_to_json(v, indent + 1)}' for k, v in obj.items()
        )
        return "{\n" + inner + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_to_json(v, indent) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj)}")


def _add_problem_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("-m", type=int, required=True, help="number of forms")
    p.add_argument("-n", type=int, required=True, help="number of variables")
    p.add_argument("--theta", required=True, help="comma-separated thresholds")
    p.add_argument("--weights", default=None, help="comma-separated weights (default: equal, n/m)")
    p.add_argument("--norm", default="sup", help="sup | euclidean | p:<exponent>")
    p.add_argument("--mode", default=MODE_INHOMOGENEOUS, choices=("inhomogeneous", "congruence"))
    p.add_argument("--modulus", type=int, default=1)
    p.add_argument("--residues", default=None, help="comma-separated m+n residues (congruence mode)")
    p.add_argument("--orthant", default=None,
                   help="comma-separated m+n sign codes: any,pos,neg,nonneg,nonpos")
    p.add_argument("--q-lower", default=Q_LOWER_EXCLUSIVE0, choices=("exclusive0", "inclusive1"))
    p.add_argument("--strict", action="store_true", help="require gcd(residues, N) = 1")


def _problem_from_args(args) -> ApproximationProblem:
    m, n = args.m, args.n
    thetas = tuple(float(x) for x in args.theta.split(","))
    if args.weights:
        weights = tuple(float(x) for x in args.weights.split(","))
    else:
        weights = tuple(n / m for _ in range(m))
    problem = ApproximationProblem(
        m=m,
        n=n,
        thetas=thetas,
        weights=weights,
        norm=parse_norm(args.norm),
        mode=args.mode,
        modulus=args.modulus,
        residues=tuple(int(x) for x in args.residues.split(",")) if args.residues else None,
        orthant=tuple(s.strip() for s in args.orthant.split(",")) if args.orthant else None,
        q_lower=args.q_lower,
    )
    return validate(problem, strict=args.strict)


def _sample_from_args(args, problem) -> SamplePoint:
    m, n = problem.m, problem.n
    u = np.zeros((m, n))
    v = np.zeros(m)
    if getattr(args, "sample_file", None):
        kv = {}
        with open(args.sample_file) as fh:
            for raw in fh:
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                key, value = (s.strip() for s in line.split("=", 1))
                kv[key] = value
        if "u" in kv:
            u = np.array([float(x) for x in kv["u"].split(",")]).reshape(m, n)
        if "v" in kv:
            v = np.array([float(x) for x in kv["v"].split(",")])
    if getattr(args, "u", None):
        u = np.array([float(x) for x in args.u.split(",")]).reshape(m, n)
    if getattr(args, "v", None):
        v = np.array([float(x) for x in args.v.split(",")])
    return SamplePoint(u=u, v=v)


def _constants_payload(problem, tol):
    c = const_mod.constants_for(problem, tol)
    return {
        "schema_version": SCHEMA_VERSION,
        "c_mean": c.c_mean,
        "sigma2_theorem": c.sigma2_theorem,
        "sigma2_proof_variant": c.sigma2_proof_variant,
        "omega_n": c.omega_n,
        "zeta_N": c.zeta_n_value,
        "residue_double_sum": c.residue_double_sum,
        "truncation_bounds": {
            "zeta_N": c.zeta_n_bound,
            "residue_double_sum": c.residue_double_sum_bound,
        },
        "tolerance": c.tolerance,
    }


def cmd_constants(args) -> int:
    problem = _problem_from_args(args)
    print(_to_json(_constants_payload(problem, args.tol)))
    return EXIT_OK


def cmd_count(args) -> int:
    problem = _problem_from_args(args)
    sample = _sample_from_args(args, problem)
    if args.brute_force:
        res = counting.brute_force_delta(problem, sample, args.T)
    else:
        res = counting.delta(problem, sample, args.T)
    print(_to_json({
        "schema_version": SCHEMA_VERSION,
        "total": res.total,
        "q_enumerated": res.q_enumerated,
        "T": res.T,
    }))
    return EXIT_OK


def _resolve_parallelism(explicit):
    if explicit is not None:
        return explicit
    env = os.environ.get("DIOCLT_THREADS")
    if env:
        return int(env)
    return None


def _variance_report(f_variance, c):
    d_thm = abs(f_variance - c.sigma2_theorem)
    d_var = abs(f_variance - c.sigma2_proof_variant)
    if d_thm == d_var:
        closer = "tie"
    elif d_thm < d_var:
        closer = "sigma2_theorem"
    else:
        closer = "sigma2_proof_variant"
    return {
        "empirical_f_variance": f_variance,
        "sigma2_theorem": c.sigma2_theorem,
        "sigma2_proof_variant": c.sigma2_proof_variant,
        "closer_candidate": closer,
    }


def _gof_payload(gof):
    return {"statistic": gof.statistic, "p_value": gof.p_value, "n_samples": gof.n_samples,
            "sigma2_used": gof.sigma2_used}


def cmd_simulate(args) -> int:
    if args.config:
        with open(args.config) as fh:
            config = parse_config_text(fh.read())
        if args.seed is not None:
            from dataclasses import replace
            config = replace(config, seed=args.seed)
    else:
        if args.m is None or args.n is None or args.theta is None:
            raise ValidationError("simulate needs -m, -n and --theta (or --config)")
        problem = _problem_from_args(args)
        if args.M is None or args.samples is None:
            raise ValidationError("simulate needs -M and --samples (or --config)")
        config = SimulationConfig(
            problem=problem,
            M=args.M,
            num_samples=args.samples,
            seed=args.seed if args.seed is not None else 0,
            parallelism=args.parallelism,
            centering=args.centering,
        ).validated()
    if args.parallelism is not None or os.environ.get("DIOCLT_THREADS"):
        from dataclasses import replace
        config = replace(config, parallelism=_resolve_parallelism(args.parallelism))

    summary = montecarlo.run_simulation(config)
    c = const_mod.constants_for(config.problem, args.tol)

    if args.csv:
        try:
            with open(args.csv, "w", newline="") as fh:
                fh.write("sample_index,delta,f_value\n")
                for i in range(config.num_samples):
                    fh.write(f"{i},{int(summary.deltas[i])},{_fmt(summary.f_values[i])}\n")
        except OSError as exc:
            print(f"cannot write CSV: {exc}", file=sys.stderr)
            return EXIT_IO

    gof = {}
    for name, sigma2 in (("sigma2_theorem", c.sigma2_theorem),
                         ("sigma2_proof_variant", c.sigma2_proof_variant)):
        gof[name] = {
            "ks": _gof_payload(stats.ks_test(summary.f_values, sigma2)),
            "ad": _gof_payload(stats.ad_test(summary.f_values, sigma2)),
        }

    payload = {
        "schema_version": SCHEMA_VERSION,
        "config": {
            "m": config.problem.m,
            "n": config.problem.n,
            "thetas": list(config.problem.thetas),
            "weights": list(config.problem.weights),
            "norm": norm_to_str(config.problem.norm),
            "mode": config.problem.mode,
            "M": config.M,
            "num_samples": config.num_samples,
            "seed": config.seed,
            "centering": config.centering,
        },
        "c_mean": summary.c_mean,
        "delta_mean": summary.delta_mean,
        "delta_variance": summary.delta_variance,
        "f_mean": summary.f_mean,
        "f_variance": summary.f_variance,
        "f_skewness": summary.f_skewness,
        "variance_report": _variance_report(summary.f_variance, c),
        "goodness_of_fit": gof,
        "p_values_approximate": config.centering == CENTER_EMPIRICAL,
        "wall_time_s": summary.wall_time_s,
        "samples_per_second": summary.samples_per_second,
    }
    text = _to_json(payload)
    if args.summary:
        try:
            with open(args.summary, "w") as fh:
                fh.write(text + "\n")
        except OSError as exc:
            print(f"cannot write summary: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        print(text)
    return EXIT_OK


def cmd_verify_mean(args) -> int:
    problem = _problem_from_args(args)
    grid = [int(x) for x in args.M_grid.split(",")]
    if len(grid) < 2:
        raise ValidationError("M grid needs at least two points")
    parallelism = _resolve_parallelism(args.parallelism)
    print("M,oracle,mc_mean,stderr,z")
    all_ok = True
    for M in grid:
        oracle = montecarlo.exact_mean_oracle(problem, math.exp(M))
        config = SimulationConfig(problem=problem, M=M, num_samples=args.samples,
                                  seed=args.seed, parallelism=parallelism).validated()
        summary = montecarlo.run_simulation(config)
        se = math.sqrt(summary.delta_variance / config.num_samples)
        z = (summary.delta_mean - oracle) / se if se > 0 else 0.0
        print(f"{M},{_fmt(oracle)},{_fmt(summary.delta_mean)},{_fmt(se)},{_fmt(z)}")
        if abs(z) > 4.0:
            all_ok = False
    return EXIT_OK if all_ok else EXIT_STAT_FAIL


def cmd_window(args) -> int:
    problem = _problem_from_args(args)
    sample = _sample_from_args(args, problem)
    series = counting.window_counts(problem, sample, args.M)
    print("s,count")
    for s in range(series.M):
        print(f"{s},{int(series.counts[s])}")
    print(f"sum,{series.total}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dioclt",
                                     description="Weighted Diophantine counting experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", help="print the limit-law constants as JSON")
    _add_problem_flags(p)
    p.add_argument("--tol", type=float, default=const_mod.DEFAULT_TOL)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("count", help="count solutions for one sample point")
    _add_problem_flags(p)
    p.add_argument("-T", type=float, required=True)
    p.add_argument("--u", default=None, help="row-major comma-separated m*n entries")
    p.add_argument("--v", default=None, help="comma-separated m entries")
    p.add_argument("--sample-file", default=None)
    p.add_argument("--brute-force", action="store_true")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("simulate", help="run a Monte Carlo experiment")
    _add_problem_flags(p)
    for a in p._actions:  # config files may replace the problem flags
        if a.dest in ("m", "n", "theta"):
            a.required = False
    p.add_argument("--config", default=None, help="key=value config file")
    p.add_argument("-M", type=int, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--parallelism", type=int, default=None)
    p.add_argument("--centering", default=CENTER_THEOREM,
                   choices=(CENTER_THEOREM, CENTER_EMPIRICAL))
    p.add_argument("--csv", default=None, help="per-sample output CSV path")
    p.add_argument("--summary", default=None, help="summary JSON path (default: stdout)")
    p.add_argument("--tol", type=float, default=const_mod.DEFAULT_TOL)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify-mean", help="compare Monte Carlo means with the exact oracle")
    _add_problem_flags(p)
    p.add_argument("--M-grid", required=True, help="comma-separated window exponents")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--parallelism", type=int, default=None)
    p.set_defaults(func=cmd_verify_mean)

    p = sub.add_parser("window", help="per-annulus counts for one sample point")
    _add_problem_flags(p)
    p.add_argument("-M", type=int, required=True)
    p.add_argument("--u", default=None)
    p.add_argument("--v", default=None)
    p.add_argument("--sample-file", default=None)
    p.set_defaults(func=cmd_window)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, ConfigError, ValueError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ResourceBudgetError as exc:
        print(f"resource budget exceeded: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
