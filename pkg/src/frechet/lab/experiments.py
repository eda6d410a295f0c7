"""Replicated error sweeps, bound comparisons and tail coverage."""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .. import bounds as B
from ..errors import FrechetError
from ..estimators import parallel_barycenter, stochastic_barycenter_approx
from ..rng import make_rng
from ..solvers import StepSchedule, empirical_barycenter, iterated_barycenter, step_size
from .config import ExperimentConfig

CHUNK = 100
SLACK = 3.0
RESULT_COLUMNS = (
    "experiment_id", "space", "kappa", "epsilon", "estimator", "n", "replicates",
    "mse", "mse_stderr", "q50", "q90", "q99", "exp_bound", "tail_bound", "delta",
    "exceedance", "flags", "seed",
)


@dataclass
class SummaryRow:
    experiment_id: str
    space: str
    kappa: float
    epsilon: float
    estimator: str
    n: int
    replicates: int
    mse: float
    mse_stderr: float
    q50: float
    q90: float
    q99: float
    exp_bound: float
    tail_bound: float
    delta: float
    exceedance: float
    flags: int
    seed: int


@dataclass
class TailCoverageReport:
    exceedance: float
    threshold: float
    replicates: int
    passed: bool


@dataclass
class ExperimentResult:
    rows: list
    errors: dict  # n -> array of distances d(estimate, b*)
    sigma2: float
    sigma2_stderr: float
    checks: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(c["passed"] for c in self.checks.values())


def tail_threshold(delta, R):
    return delta + SLACK * math.sqrt(delta * (1 - delta) / R)


def check_tail_coverage(errors, bound, delta) -> TailCoverageReport:
    """Fraction of errors above ``bound``; passes when within 3 binomial standard errors of ``delta``."""
    errors = np.asarray(errors, dtype=float)
    if isinstance(bound, (list, tuple, np.ndarray)):
        bound = np.asarray(bound, dtype=float)
    R = len(errors)
    exc = float(np.mean(errors > bound))
    thr = tail_threshold(delta, R)
    return TailCoverageReport(exc, thr, R, exc <= thr)


def estimator_label(est):
    kind = est["kind"]
    if kind == "parallel":
        return f"parallel(P={est['P']})"
    if kind == "stochastic-approx":
        return f"stochastic-approx(eps={est['eps']},delta={est['delta']})"
    if kind == "iterated":
        return f"iterated({est.get('schedule', 'harmonic')})"
    return "empirical"


def _schedule(cfg: ExperimentConfig):
    if cfg.estimator.get("schedule", "harmonic") == "positive-curvature":
        return StepSchedule.positive_curvature(B.alpha_constant(cfg.kappa, cfg.epsilon))
    return StepSchedule.harmonic()


def _draw(space, samplers, rng, n):
    """``n`` samples; sample ``i`` comes from sampler ``i mod k``."""
    k = len(samplers)
    if k == 1:
        return samplers[0].sample(rng, n)
    parts = [samplers[j].sample(rng, len(range(j, n, k))) for j in range(k)]
    if isinstance(parts[0], list):
        out = [None] * n
        for j, part in enumerate(parts):
            out[j::k] = part
        return out
    out = np.empty((n,) + parts[0].shape[1:])
    for j, part in enumerate(parts):
        out[j::k] = part
    return out


def _run_chunk(args):
    cfg_dict, n_idx, n, lo, hi = args
    cfg = ExperimentConfig(**cfg_dict)
    space, samplers = cfg.build()
    est = cfg.estimator
    center = samplers[0].center
    tol = est.get("tol", 1e-9)
    max_rounds = est.get("max_rounds", 10_000)
    method = est.get("method", "auto")
    errs = np.empty(hi - lo)
    flags = 0
    if est["kind"] == "iterated" and hasattr(space, "interpolate_rows"):
        sched = _schedule(cfg)
        rngs = [make_rng(cfg.seed, n_idx, r) for r in range(lo, hi)]
        X = np.stack([_draw(space, samplers, g, n) for g in rngs])
        b = X[:, 0]
        for k in range(2, n + 1):
            b = space.interpolate_rows(b, X[:, k - 1], step_size(sched, k))
        for i in range(hi - lo):
            errs[i] = space.distance(center, b[i])
        return errs, flags
    for i, r in enumerate(range(lo, hi)):
        rng = make_rng(cfg.seed, n_idx, r)
        x = _draw(space, samplers, rng, n)
        kind = est["kind"]
        if kind == "empirical":
            rep = empirical_barycenter(space, x, method, tol, max_rounds)
            flags += not rep.converged
            b = rep.result
        elif kind == "iterated":
            b = iterated_barycenter(space, x, _schedule(cfg)).result
        elif kind == "parallel":
            b = parallel_barycenter(space, x, est["P"], method, tol, max_rounds)
        else:
            b, _ = stochastic_barycenter_approx(
                space, x, est["eps"], est["delta"], est.get("bound", "auto"), seed=rng
            )
        errs[i] = space.distance(center, b)
    return errs, flags


def effective_workers(requested: int) -> int:
    env = os.environ.get("FRECHET_THREADS")
    if env is not None:
        try:
            cap = int(env)
        except ValueError:
            raise FrechetError(f"FRECHET_THREADS must be an integer (got '{env}')") from None
        requested = min(requested, cap) if requested else cap
    return max(0, requested)


def population_variance(cfg, space, samplers):
    """Total variance (mean over heteroskedastic components) and its standard error."""
    vals, ses = [], []
    for j, s in enumerate(samplers):
        if s.sigma2 is not None:
            vals.append(s.sigma2)
            ses.append(0.0)
        else:
            from .samplers import estimate_total_variance

            v, se = estimate_total_variance(space, s, s.center, cfg.variance_mc, make_rng(cfg.seed, 2**31 - 1, j))
            vals.append(v)
            ses.append(se)
    k = len(vals)
    return float(np.mean(vals)), float(math.sqrt(sum(se * se for se in ses)) / k)


def _bounds_for(cfg, samplers, n, sigma2_upper):
    est = cfg.estimator
    kappa, eps = cfg.kappa, cfg.epsilon
    hetero = len(samplers) > 1
    K2s = [s.K2 for s in samplers]
    Rs = [s.support_radius for s in samplers]
    q = B.BoundQuery(
        n=n, kappa=kappa, epsilon=eps if kappa > 0 else None, sigma2=sigma2_upper,
        K2=None if any(k is None for k in K2s) else float(np.mean(K2s)),
        R=None if any(r is None for r in Rs) else float(max(Rs)),
        delta=cfg.delta, heteroskedastic=hetero,
    )
    exp_b = tail_b = math.nan
    flavor = cfg.tail_flavor
    try:
        if est["kind"] == "empirical":
            exp_b = B.empirical_expectation_bound(q)
            tail_b = B.empirical_tail_bound(q, flavor)
        elif est["kind"] == "iterated":
            sched = est.get("schedule", "harmonic")
            if kappa <= 0 and sched == "harmonic":
                exp_b = B.iterated_expectation_bound(q)
                tail_b = B.iterated_tail_bound_cat0(q, flavor)
            elif kappa > 0 and sched == "positive-curvature" and not hetero:
                exp_b = B.iterated_expectation_bound(q)
    except FrechetError:
        pass
    return exp_b, tail_b


def _slope(ns, mses):
    ns = np.asarray(ns, float)
    m = np.asarray(mses, float)
    return float(np.polyfit(np.log(ns), np.log(m), 1)[0])


def run_error_experiment(cfg: ExperimentConfig, workers: int | None = None) -> ExperimentResult:
    """Replicate sweep over ``cfg.n_grid``; returns summary rows plus the raw errors."""
    space, samplers = cfg.build()
    sigma2, sigma2_se = population_variance(cfg, space, samplers)
    sigma2_upper = sigma2 + SLACK * sigma2_se
    nw = effective_workers(cfg.workers if workers is None else workers)
    cfg_dict = asdict(cfg)
    tasks = []
    for n_idx, n in enumerate(cfg.n_grid):
        for lo in range(0, cfg.replicates, CHUNK):
            tasks.append((cfg_dict, n_idx, n, lo, min(lo + CHUNK, cfg.replicates)))
    if nw > 0 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=nw) as pool:
            results = list(pool.map(_run_chunk, tasks))
    else:
        results = [_run_chunk(t) for t in tasks]
    rows, errors = [], {}
    label = estimator_label(cfg.estimator)
    eps = cfg.epsilon if cfg.epsilon is not None else math.nan
    for n_idx, n in enumerate(cfg.n_grid):
        chunk = [res for t, res in zip(tasks, results) if t[1] == n_idx]
        d = np.concatenate([c[0] for c in chunk])
        flags = int(sum(c[1] for c in chunk))
        errors[n] = d
        d2 = d * d
        R = len(d)
        se = float(np.std(d2, ddof=1) / math.sqrt(R)) if R > 1 else 0.0
        exp_b, tail_b = _bounds_for(cfg, samplers, n, sigma2_upper)
        exc = float(np.mean(d > tail_b)) if not math.isnan(tail_b) else math.nan
        q50, q90, q99 = (float(v) for v in np.quantile(d, [0.5, 0.9, 0.99]))
        rows.append(SummaryRow(
            cfg.experiment_id, space.name, cfg.kappa, eps, label, n, R,
            float(np.mean(d2)), se, q50, q90, q99, exp_b, tail_b, cfg.delta, exc, flags, cfg.seed,
        ))
    result = ExperimentResult(rows, errors, sigma2, sigma2_se)
    result.checks = evaluate_checks(cfg, result)
    return result


def evaluate_checks(cfg, result):
    out = {}
    rows = result.rows
    for name in cfg.checks:
        if name == "expectation":
            usable = [r for r in rows if not math.isnan(r.exp_bound)]
            ok = bool(usable) and all(r.mse <= r.exp_bound + SLACK * r.mse_stderr for r in usable)
            detail = "; ".join(f"n={r.n}: mse={r.mse:.4g} bound={r.exp_bound:.4g}" for r in usable) or "no bound available"
        elif name == "tail":
            usable = [r for r in rows if not math.isnan(r.exceedance)]
            ok = bool(usable) and all(r.exceedance <= tail_threshold(r.delta, r.replicates) for r in usable)
            detail = "; ".join(f"n={r.n}: exceedance={r.exceedance:.4g}" for r in usable) or "no bound available"
        elif name == "slope":
            if len(rows) < 2:
                ok, detail = False, "needs at least two grid sizes"
            else:
                s = _slope([r.n for r in rows], [r.mse for r in rows])
                ok = -1.15 <= s <= -0.85
                detail = f"slope={s:.4f}"
        else:  # hilbert_rate: E d^2 = sigma^2 / n in flat space
            ok = all(abs(r.mse - result.sigma2 / r.n) <= SLACK * r.mse_stderr for r in rows)
            detail = "; ".join(f"n={r.n}: mse={r.mse:.4g} target={result.sigma2 / r.n:.4g}" for r in rows)
        out[name] = {"passed": bool(ok), "detail": detail}
    return out


def fmt(x):
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        return format(x, ".12g")
    return str(x)


def write_results_csv(path, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RESULT_COLUMNS)
        for r in rows:
            w.writerow([fmt(getattr(r, c)) for c in RESULT_COLUMNS])


def summary_text(cfg, result):
    lines = [f"experiment {cfg.experiment_id}: sigma2={result.sigma2:.6g} (se {result.sigma2_stderr:.2g})"]
    for r in result.rows:
        lines.append(
            f"  n={r.n:<6d} mse={r.mse:.6g} se={r.mse_stderr:.2g} exp_bound={fmt(r.exp_bound)} "
            f"tail_bound={fmt(r.tail_bound)} exceedance={fmt(r.exceedance)} flags={r.flags}"
        )
    for name, c in result.checks.items():
        lines.append(f"  [{'PASS' if c['passed'] else 'FAIL'}] {name}: {c['detail']}")
    return "\n".join(lines)
