"""Bootstrap approximation of finite-set barycenters and batch (parallel) estimation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bounds import sample_size_bernstein, sample_size_hoeffding
from .errors import BudgetOverflow, DomainError, FrechetError
from .rng import make_rng
from .solvers import StepSchedule, empirical_barycenter, iterated_barycenter

BUDGET_CAP = 10**9


@dataclass(frozen=True)
class ApproxBudget:
    m: int
    bound_kind: str
    eps: float
    delta: float
    D: float
    sigma_tilde2: float
    m_hoeffding: int | None = None
    m_bernstein: int | None = None


@dataclass(frozen=True)
class BatchPlan:
    P: int
    N: int

    def __post_init__(self):
        if self.P < 1 or self.N < 1:
            raise DomainError("P and N must be >= 1")

    @property
    def n(self):
        return self.P * self.N

    @classmethod
    def for_size(cls, n, P):
        if P < 1 or n % P:
            raise DomainError(f"{n} samples cannot be split into {P} equal batches")
        return cls(P, n // P)


def pairwise_stats(space, points):
    """Diameter and ``sigma_tilde^2 = sum_{i,j} d(x_i, x_j)^2 / (2 n^2)`` over ordered pairs."""
    n = len(points)
    D = 0.0
    total = 0.0
    for i in range(n):
        d = space.distances(points[i], points)
        D = max(D, float(np.max(d)))
        total += float(np.sum(d * d))
    return D, total / (2.0 * n * n)


def plan_budget(D, sigma_tilde2, eps, delta, bound_kind="auto") -> ApproxBudget:
    mh = sample_size_hoeffding(D, eps, delta)
    mb = sample_size_bernstein(sigma_tilde2, D, eps, delta)
    if bound_kind == "hoeffding":
        m = mh
    elif bound_kind == "bernstein":
        m = mb
    elif bound_kind == "auto":
        m = min(mh, mb)
    else:
        raise DomainError(f"unknown bound kind '{bound_kind}'")
    return ApproxBudget(max(m, 1), bound_kind, eps, delta, D, sigma_tilde2, mh, mb)


def stochastic_barycenter_approx(space, points, eps, delta, bound_kind="hoeffding", seed=0, cap=BUDGET_CAP):
    """Iterated barycenter of ``m`` uniform resamples, ``m`` from the PAC budget.

    Returns
    -------
    point, ApproxBudget
    """
    if len(points) == 0:
        raise FrechetError("empty point list")
    D, s2 = pairwise_stats(space, points)
    budget = plan_budget(D, s2, eps, delta, bound_kind)
    if budget.m > cap:
        raise BudgetOverflow(budget.m, cap)
    rng = seed if isinstance(seed, np.random.Generator) else make_rng(seed)
    idx = rng.integers(0, len(points), size=budget.m)
    rep = iterated_barycenter(space, space.take(points, idx), StepSchedule.harmonic())
    return rep.result, budget


def parallel_barycenter(space, samples, plan: BatchPlan | int, method="auto", tol=1e-9, max_rounds=10_000):
    """Barycenter of the barycenters of ``P`` consecutive batches of size ``N``."""
    n = len(samples)
    if isinstance(plan, int):
        plan = BatchPlan.for_size(n, plan)
    if plan.n != n:
        raise DomainError(f"batch plan covers {plan.n} samples but {n} were given")
    if plan.P == 1:
        return empirical_barycenter(space, samples, method, tol, max_rounds).result
    ys = [
        empirical_barycenter(space, space.take(samples, range(j * plan.N, (j + 1) * plan.N)), method, tol, max_rounds).result
        for j in range(plan.P)
    ]
    return empirical_barycenter(space, space.as_points(ys), method, tol, max_rounds).result


class SymmetrizedSampler:
    """Draw from ``base``; with probability 1/2 reflect the draw through ``p``."""

    def __init__(self, space, p, base):
        if not space.smooth:
            raise FrechetError("point symmetry needs a smooth space")
        self.space = space
        self.center = p
        self.base = base
        self.support_radius = None
        self.K2 = None

    def sample(self, rng, size):
        x = self.base.sample(rng, size)
        flip = rng.random(size) < 0.5
        out = np.array(x, copy=True)
        for i in np.flatnonzero(flip):
            out[i] = self.space.point_symmetry(self.center, x[i])
        return out


def symmetrize_sampler(space, p, base):
    return SymmetrizedSampler(space, p, base)
