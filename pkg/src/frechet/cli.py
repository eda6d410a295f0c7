"""Command-line interface: ``frechet {solve,approx,bound,experiment}``.

Exit codes: 0 success, 1 input or configuration error, 2 numerical
non-convergence, 3 an enabled experiment check failed.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys

import numpy as np

from . import bounds as B
from .errors import FrechetError, MissingFieldError
from .estimators import stochastic_barycenter_approx
from .geometry import ConvexDomainSpec, max_admissible_epsilon, minimal_enclosing_ball, validate_domain
from .solvers import StepSchedule, empirical_barycenter, iterated_barycenter
from .spaces import SPACE_NAMES, TreeSpace, make_space, read_edge_list, read_points
from .spaces.io import format_point

EXIT_OK, EXIT_INPUT, EXIT_NONCONV, EXIT_CHECKS = 0, 1, 2, 3


class InputError(FrechetError):
    pass


def _fmt(v):
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".12g")


def _columns(path):
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if row and any(c.strip() for c in row):
                try:
                    [float(c) for c in row]
                except ValueError:
                    continue
                return len(row)
    raise InputError(f"{path}: no points")


def load_space_and_points(args):
    if args.space == "tree":
        if not args.edges:
            raise InputError("--edges is required for --space tree")
        space = TreeSpace(read_edge_list(args.edges))
    else:
        dim = args.dim
        if dim is None:
            cols = _columns(args.points)
            dim = {"euclidean": cols, "sphere": cols - 1, "hyperbolic": cols - 1}.get(args.space)
            if args.space == "spd":
                dim = int(round(math.sqrt(cols)))
        space = make_space(args.space, dim, args.kappa)
    return space, read_points(args.points, space)


def resolve_epsilon(space, points, epsilon, out=None):
    """Check the convex-domain hypothesis for ``kappa > 0``; derive epsilon when omitted."""
    if space.kappa <= 0:
        return epsilon
    center, rho = minimal_enclosing_ball(space, points)
    if epsilon is None:
        eps = max_admissible_epsilon(space.kappa, rho)
        if eps is None:
            raise InputError(
                f"points span an enclosing ball of radius {rho:.12g}: no admissible epsilon exists"
            )
        print(f"epsilon={_fmt(eps)} (derived from enclosing radius {_fmt(rho)})", file=out or sys.stdout)
        return eps
    rep = validate_domain(ConvexDomainSpec(center, rho, epsilon), space.geometry)
    if not rep:
        raise InputError(f"domain validation failed: {rep.violations[0]}")
    return epsilon


def _write_point(space, x, path):
    row = ",".join(format_point(space, x))
    if path:
        with open(path, "w") as fh:
            fh.write(row + "\n")
    else:
        print(row)


def cmd_solve(args):
    space, pts = load_space_and_points(args)
    eps = resolve_epsilon(space, pts, args.epsilon)
    if args.method == "iterated":
        if args.schedule == "cat-kappa" and space.kappa > 0:
            sched = StepSchedule.positive_curvature(B.alpha_constant(space.kappa, eps))
        else:
            sched = StepSchedule.harmonic()
        rep = iterated_barycenter(space, pts, sched)
    else:
        rep = empirical_barycenter(space, pts, args.method, args.tol, args.max_rounds)
    _write_point(space, rep.result, args.out)
    print(f"method={rep.method} iterations={rep.iterations} movement={_fmt(rep.movement)}")
    if not rep.converged:
        print(f"warning: no convergence after {rep.iterations} rounds", file=sys.stderr)
        return EXIT_NONCONV
    return EXIT_OK


def cmd_approx(args):
    space, pts = load_space_and_points(args)
    resolve_epsilon(space, pts, args.epsilon)
    x, budget = stochastic_barycenter_approx(space, pts, args.eps, args.delta, args.bound, seed=args.seed)
    kind = args.bound
    if kind == "auto":
        kind = "hoeffding" if budget.m == budget.m_hoeffding else "bernstein"
    print(f"m={budget.m}")
    print(f"D={_fmt(budget.D)}")
    print(f"sigma_tilde2={_fmt(budget.sigma_tilde2)}")
    print(f"bound={kind}")
    _write_point(space, x, args.out)
    if args.out:
        print("point=" + ",".join(format_point(space, x)))
    return EXIT_OK


FLAG_OF = {
    "n": "--n", "kappa": "--kappa", "epsilon": "--epsilon", "sigma2": "--sigma2",
    "K2": "--K2", "R": "--R", "delta": "--delta", "D": "--D", "eps": "--eps",
    "sigma_tilde2": "--sigma-tilde2",
}


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise InputError(f"--which {args.which} requires {FLAG_OF[name]}")


def cmd_bound(args):
    w = args.which
    kappa = args.kappa if args.kappa is not None else 0.0
    if kappa > 0 and w not in ("m-hoeffding", "m-bernstein", "iterated-tail"):
        _need(args, "epsilon")
    q = B.BoundQuery(
        n=args.n, kappa=kappa, epsilon=args.epsilon, sigma2=args.sigma2, K2=args.K2,
        R=args.R, delta=args.delta, heteroskedastic=args.heteroskedastic,
    )
    try:
        if w == "alpha":
            v = B.alpha_constant(kappa, args.epsilon)
        elif w == "lipschitz":
            v = B.lipschitz_constant(kappa, args.epsilon)
        elif w == "A":
            v = B.expectation_constant(kappa, args.epsilon, args.heteroskedastic)
        elif w == "empirical-exp":
            v = B.empirical_expectation_bound(q)
        elif w == "iterated-exp":
            v = B.iterated_expectation_bound(q)
        elif w.startswith("tail-"):
            v = B.empirical_tail_bound(q, w[5:], strict_paper=args.strict_paper)
        elif w == "iterated-tail":
            v = B.iterated_tail_bound_cat0(q, args.flavor)
        elif w == "riemannian-tail":
            v = B.riemannian_tail_bound(q, args.case, alpha=args.alpha)
        elif w == "m-hoeffding":
            _need(args, "D", "eps", "delta")
            v = B.sample_size_hoeffding(args.D, args.eps, args.delta)
        else:
            _need(args, "sigma_tilde2", "D", "eps", "delta")
            v = B.sample_size_bernstein(args.sigma_tilde2, args.D, args.eps, args.delta)
    except MissingFieldError as exc:
        raise InputError(f"--which {w} requires {FLAG_OF.get(exc.field, exc.field)}") from None
    print(_fmt(v))
    return EXIT_OK


def cmd_experiment(args):
    from .lab.config import load_config
    from .lab.experiments import run_error_experiment, summary_text, write_results_csv

    cfg = load_config(args.config, seed=args.seed)
    result = run_error_experiment(cfg, workers=args.workers)
    out = args.out or f"{cfg.experiment_id}.csv"
    write_results_csv(out, result.rows)
    text = summary_text(cfg, result)
    print(text)
    if args.summary:
        with open(args.summary, "w") as fh:
            fh.write(text + "\n")
    return EXIT_OK if result.passed else EXIT_CHECKS


def _space_flags(p, points_required=True):
    p.add_argument("--space", choices=SPACE_NAMES, default="euclidean")
    p.add_argument("--kappa", type=float, help="curvature (sphere > 0, hyperbolic < 0)")
    p.add_argument("--dim", type=int, help="dimension; inferred from the point file when omitted")
    p.add_argument("--points", required=points_required, help="point CSV")
    p.add_argument("--edges", help="edge-list CSV (tree space)")
    p.add_argument("--epsilon", type=float, help="domain parameter for kappa > 0")
    p.add_argument("--out", help="output file")


def build_parser():
    parser = argparse.ArgumentParser(prog="frechet", description="Barycenters in geodesic spaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="empirical or iterated barycenter of a point file")
    _space_flags(p)
    p.add_argument("--method", choices=["auto", "exact", "cyclic", "gradient", "iterated"], default="auto")
    p.add_argument("--schedule", choices=["harmonic", "cat-kappa"], default="harmonic")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--max-rounds", type=int, default=10_000)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("approx", help="bootstrap approximation with a PAC budget")
    _space_flags(p)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--bound", choices=["hoeffding", "bernstein", "auto"], default="auto")
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("bound", help="evaluate a constant, bound or sample size")
    p.add_argument("--which", required=True, choices=[
        "alpha", "lipschitz", "A", "empirical-exp", "iterated-exp", "tail-subgaussian",
        "tail-hoeffding", "tail-bernstein", "iterated-tail", "riemannian-tail",
        "m-hoeffding", "m-bernstein",
    ])
    p.add_argument("--kappa", type=float)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--sigma2", type=float)
    p.add_argument("--K2", type=float)
    p.add_argument("--R", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--D", type=float)
    p.add_argument("--eps", type=float)
    p.add_argument("--sigma-tilde2", dest="sigma_tilde2", type=float)
    p.add_argument("--alpha", type=float, help="override alpha in the bounded Riemannian case")
    p.add_argument("--flavor", choices=list(B.TAIL_FLAVORS), default="subgaussian")
    p.add_argument("--case", choices=["unbounded", "bounded"], default="bounded")
    p.add_argument("--heteroskedastic", action="store_true")
    p.add_argument("--strict-paper", action="store_true", help="leading tail term A~ instead of sqrt(A~)")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("experiment", help="run a Monte Carlo experiment from a JSON config")
    p.add_argument("config", help="config path, or the name of a shipped config")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", help="results CSV (default <experiment_id>.csv)")
    p.add_argument("--summary", help="also write the summary text here")
    p.add_argument("--workers", type=int, help="process workers (0 = sequential)")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (FrechetError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
