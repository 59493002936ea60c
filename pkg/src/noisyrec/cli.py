"""Command-line entry point.

Exit codes: 0 success, 1 domain or range error, 2 usage error, 3 failed
verification.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

from . import gaussian as gs
from .allocation import (
    TieBreak,
    allocate,
    group_utilities,
    lower_bound_check,
    minority_share,
)
from .constructions import construct, symmetric_vertex_experiment
from .errors import EmptyGrid, NoisyRecError
from .experiment import Prior, posterior, signal_probability
from .io import dumps_experiment, load_experiment
from .region import empirical_cloud, general_utility_triangle, symmetric_utility_triangle
from .symmetry import SYMMETRY_TOL, is_symmetric, verify_pairwise_share_bound
from .verification import ALIASES, CRITERIA, VerifyOptions, check_experiment, run_suite

EXIT_DOMAIN = 1
EXIT_USAGE = 2
EXIT_VERIFY = 3


def _default_seed() -> int:
    env = os.environ.get("NOISYREC_SEED")
    return int(env) if env else 42


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _kappa_grid(args) -> list[float]:
    if args.kappa_grid is not None:
        return [float(k) for k in args.kappa_grid.split(",") if k.strip()]
    if args.kappa is not None:
        return [args.kappa]
    n = int(round((args.kappa_stop - args.kappa_start) / args.kappa_step))
    return [round(args.kappa_start + i * args.kappa_step, 12) for i in range(n + 1)]


def cmd_construct(args) -> int:
    prior = Prior(args.alpha)
    if args.construction == "symmetric-vertex":
        exp, inv = symmetric_vertex_experiment(prior)
    else:
        exp, inv = construct(args.construction, prior, getattr(args, "p", None)), None
    _emit(dumps_experiment(exp, prior, inv), args.out)
    return 0


def cmd_eval(args) -> int:
    exp, prior, inv = load_experiment(args.experiment)
    tb = TieBreak(args.tie_break)
    signals = []
    rule = allocate(exp, prior, tb)
    for i, label in enumerate(exp.labels):
        p_s = signal_probability(exp, prior, i)
        signals.append({
            "signal": label,
            "probability": p_s,
            "posterior": posterior(exp, prior, i) if p_s > 0 else None,
            "content": rule[i].value,
        })
    gu = group_utilities(exp, prior, tb)
    result = {
        "alpha": prior.alpha,
        "tie_break": tb.value,
        "signals": signals,
        "minority_share": minority_share(exp, prior, tb),
        "u_min": gu.u_min,
        "u_maj": gu.u_maj,
        "lower_bound_holds": lower_bound_check(gu, prior),
        "symmetric": None,
    }
    if inv is not None:
        tol = args.symmetry_tol
        result["symmetric"] = is_symmetric(exp, inv, tol)
        rep = verify_pairwise_share_bound(exp, prior, inv, tb, tol, require_symmetric=False)
        result["pairwise"] = rep.as_dict()
    _emit(json.dumps(result, indent=2) + "\n", args.out)
    return 0


def cmd_sweep(args) -> int:
    grid = _kappa_grid(args)
    rows = gs.sweep(args.alpha, grid)
    extra = None
    if args.mc_check:
        from .montecarlo import simulate_gaussian

        reps = [simulate_gaussian(gs.GaussianModel(args.alpha, k), n_samples=args.n_samples,
                                  seed=args.seed) for k in grid]
        extra = {"share_mc": [r.share_hat for r in reps], "share_mc_se": [r.share_se for r in reps]}
    if args.out:
        with open(args.out, "w", newline="") as fh:
            gs.write_sweep_csv(rows, fh, extra)
    else:
        gs.write_sweep_csv(rows, sys.stdout, extra)
    return 0


def cmd_region(args) -> int:
    prior = Prior(args.alpha)
    tri = symmetric_utility_triangle(prior) if args.symmetric else general_utility_triangle(prior)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "vertices.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["u_min", "u_maj", "constructor"])
        for (u, v), name in zip(tri.vertices, tri.constructors):
            w.writerow([gs.fmt17(u), gs.fmt17(v), name])
    if args.cloud:
        cloud = empirical_cloud(prior, args.cloud, args.max_signals, args.symmetric, args.seed)
        with open(out_dir / "cloud.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["u_min", "u_maj"])
            w.writerows([gs.fmt17(u), gs.fmt17(v)] for u, v in cloud)
    return 0


def cmd_verify(args) -> int:
    opts = VerifyOptions(seed=args.seed, n_samples=args.n_samples, restarts=args.restarts)
    if args.experiment:
        exp, prior, inv = load_experiment(args.experiment)
        results = [check_experiment(exp, prior, inv)]
    else:
        results = run_suite(args.only, opts)
    for r in results:
        print(r.line())
    n_pass = sum(r.passed for r in results)
    print(f"{n_pass}/{len(results)} checks passed")
    if args.report:
        report = {"passed": n_pass == len(results),
                  "checks": [r.as_dict(args.timings) for r in results]}
        Path(args.report).write_text(json.dumps(report, indent=2, default=float) + "\n")
    return 0 if n_pass == len(results) else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="noisyrec",
        description="Recommendation under noisy binary-type measurement.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="write a named construction as experiment JSON")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--out", help="output path (default stdout)")
    kinds = p.add_subparsers(dest="construction", required=True)
    kinds.add_parser("uninformative")
    kinds.add_parser("perfect")
    kinds.add_parser("symmetric-vertex")
    ext = kinds.add_parser("extremal")
    ext.add_argument("--p", type=float, required=True, help="target minority share in [0, 2*alpha]")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("eval", help="posteriors, allocation, share and utilities of an experiment")
    p.add_argument("experiment", help="experiment JSON file")
    p.add_argument("--tie-break", choices=[t.value for t in TieBreak], default="favor-minority")
    p.add_argument("--symmetry-tol", type=float, default=SYMMETRY_TOL)
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", help="Gaussian closed forms over a kappa grid (CSV)")
    p.add_argument("--alpha", type=float, required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--kappa", type=float)
    g.add_argument("--kappa-grid", help="comma-separated ascending values")
    p.add_argument("--kappa-start", type=float, default=0.05)
    p.add_argument("--kappa-stop", type=float, default=3.0)
    p.add_argument("--kappa-step", type=float, default=0.05)
    p.add_argument("--mc-check", action="store_true", help="add Monte Carlo share columns")
    p.add_argument("--n-samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("region", help="utility triangle vertices and random utility clouds (CSV)")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--symmetric", action="store_true")
    p.add_argument("--cloud", type=int, default=0, help="number of random experiments")
    p.add_argument("--max-signals", type=int, default=10)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("verify", help="run the acceptance checks")
    p.add_argument("--only", action="append",
                   choices=sorted(set(CRITERIA) | set(ALIASES)), metavar="CHECK",
                   help=f"run one check (repeatable): {', '.join(CRITERIA)}")
    p.add_argument("--experiment", help="check a single experiment JSON file instead")
    p.add_argument("--restarts", type=int, default=1000,
                   help="random symmetric experiments per alpha")
    p.add_argument("--n-samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--report", help="write a JSON report here")
    p.add_argument("--timings", action="store_true", help="include runtimes in the report")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "sweep" and args.kappa_grid is None and args.kappa is None \
            and args.kappa_step <= 0:
        parser.error("--kappa-step must be positive")
    try:
        return args.func(args)
    except EmptyGrid as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (NoisyRecError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
