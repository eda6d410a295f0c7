import math

import numpy as np
import pytest

from conftest import random_sphere_points, sphere_cap_points
from frechet.errors import BudgetOverflow, DomainError, FrechetError, NotSmoothError
from frechet.estimators import (
    BatchPlan,
    pairwise_stats,
    parallel_barycenter,
    plan_budget,
    stochastic_barycenter_approx,
    symmetrize_sampler,
)
from frechet.bounds import sample_size_bernstein, sample_size_hoeffding
from frechet.lab import ConstantSampler, UniformCapSampler
from frechet.rng import make_rng
from frechet.solvers import empirical_barycenter
from frechet.spaces import Euclidean, Sphere, TreeSpace, build_figure1_tree


def test_pairwise_stats_examples():
    e = Euclidean(1)
    assert pairwise_stats(e, np.array([[3.0]])) == (0.0, 0.0)
    D, st2 = pairwise_stats(e, np.array([[0.0], [2.0]]))
    assert D == 2 and st2 == 1


def test_pairwise_stats_brute_force(rng):
    s = Sphere(2, 1.0)
    pts = random_sphere_points(s, rng, 20)
    D, total = 0.0, 0.0
    for a in pts:
        for b in pts:
            d = s.distance(a, b)
            D = max(D, d)
            total += d * d
    got = pairwise_stats(s, pts)
    assert got[0] == D
    assert got[1] == pytest.approx(total / (2 * 20 * 20), rel=1e-14)


def test_batch_plan():
    assert BatchPlan.for_size(12, 3) == BatchPlan(3, 4)
    assert BatchPlan(3, 4).n == 12
    with pytest.raises(DomainError):
        BatchPlan.for_size(10, 3)
    with pytest.raises(DomainError):
        BatchPlan(0, 4)


def test_plan_budget_kinds():
    b = plan_budget(1.0, 0.01, 0.1, math.exp(-1), "auto")
    assert b.m_hoeffding == 400 and b.m_bernstein == 54 and b.m == 54
    assert plan_budget(1.0, 0.01, 0.1, math.exp(-1), "hoeffding").m == 400
    assert plan_budget(1.0, 0.01, 0.1, math.exp(-1), "bernstein").m == 54
    with pytest.raises(DomainError):
        plan_budget(1.0, 0.01, 0.1, 0.5, "chebyshev")


def test_auto_uses_minimum(rng):
    for _ in range(50):
        D = rng.uniform(0.1, 3)
        st2 = rng.uniform(0, 1) * D * D
        eps = rng.uniform(0.01, 0.5)
        delta = rng.uniform(0.01, 0.5)
        b = plan_budget(D, st2, eps, delta, "auto")
        assert b.m == min(sample_size_hoeffding(D, eps, delta), sample_size_bernstein(st2, D, eps, delta))


def test_approx_single_and_identical_points():
    s = Sphere(2, 1.0)
    x, budget = stochastic_barycenter_approx(s, s.pole()[None], 0.1, 0.1, seed=3)
    assert np.array_equal(x, s.pole())
    assert budget.m == 1 and budget.D == 0
    p = np.array([[0.6, 0.0, 0.8]] * 5)
    x, _ = stochastic_barycenter_approx(s, p, 0.1, 0.1, seed=3)
    assert np.allclose(x, p[0], atol=1e-15)


def test_approx_budget_matches_formula(rng):
    s = Sphere(2, 1.0)
    pts = sphere_cap_points(s, rng, 30, 0.3)
    D, st2 = pairwise_stats(s, pts)
    _, b = stochastic_barycenter_approx(s, pts, 0.05, 0.1, "hoeffding", seed=1)
    assert b.m == sample_size_hoeffding(D, 0.05, 0.1)
    _, b = stochastic_barycenter_approx(s, pts, 0.05, 0.1, "bernstein", seed=1)
    assert b.m == sample_size_bernstein(st2, D, 0.05, 0.1)


def test_approx_deterministic(rng):
    s = Sphere(2, 1.0)
    pts = sphere_cap_points(s, rng, 30, 0.3)
    a = stochastic_barycenter_approx(s, pts, 0.05, 0.1, seed=42)[0]
    b = stochastic_barycenter_approx(s, pts, 0.05, 0.1, seed=42)[0]
    c = stochastic_barycenter_approx(s, pts, 0.05, 0.1, seed=43)[0]
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_approx_overflow_reports_m():
    e = Euclidean(1)
    with pytest.raises(BudgetOverflow, match="400"):
        stochastic_barycenter_approx(e, np.array([[0.0], [1.0]]), 0.1, math.exp(-1), "hoeffding", cap=100)
    with pytest.raises(FrechetError):
        stochastic_barycenter_approx(e, np.zeros((0, 1)), 0.1, 0.1)


def test_approx_close_on_tree():
    tree, pts = build_figure1_tree(10)
    space = TreeSpace(tree)
    x, b = stochastic_barycenter_approx(space, pts, 0.2, 0.1, "hoeffding", seed=0)
    assert b.m == sample_size_hoeffding(2.0, 0.2, 0.1)
    assert space.distance(x, tree.node("root")) <= 0.2


# -- parallel ------------------------------------------------------------------


def test_parallel_single_batch_is_plain(rng):
    s = Sphere(2, 1.0)
    pts = sphere_cap_points(s, rng, 40, 0.3)
    assert np.array_equal(parallel_barycenter(s, pts, 1), empirical_barycenter(s, pts).result)


def test_parallel_euclidean_global_mean(rng):
    e = Euclidean(3)
    pts = rng.standard_normal((60, 3))
    for P in (1, 2, 3, 4, 5, 6, 10, 12, 15, 20, 30, 60):
        assert np.max(np.abs(parallel_barycenter(e, pts, P) - pts.mean(axis=0))) <= 1e-12


def test_parallel_partition_mismatch(rng):
    e = Euclidean(2)
    pts = rng.standard_normal((10, 2))
    with pytest.raises(DomainError):
        parallel_barycenter(e, pts, 3)
    with pytest.raises(DomainError):
        parallel_barycenter(e, pts, BatchPlan(2, 4))


def test_parallel_permutation_within_batches(rng):
    s = Sphere(2, 1.0)
    pts = sphere_cap_points(s, rng, 40, 0.3)
    perm = np.concatenate([rng.permutation(10) + 10 * j for j in range(4)])
    a = parallel_barycenter(s, pts, 4)
    b = parallel_barycenter(s, pts[perm], 4)
    assert s.distance(a, b) <= 1e-8


def test_parallel_tree_uses_exact():
    tree, pts = build_figure1_tree(2)
    space = TreeSpace(tree)
    x = parallel_barycenter(space, pts, 3)
    assert space.distance(x, tree.node("root")) <= 1e-12


# -- symmetrization ----------------------------------------------------------


def test_symmetrize_constant_at_p():
    s = Sphere(2, 1.0)
    p = s.pole()
    w = symmetrize_sampler(s, p, ConstantSampler(s, p))
    assert np.allclose(w.sample(make_rng(1), 50), p, atol=1e-15)


def test_symmetrize_euclidean_two_point():
    e = Euclidean(2)
    p = np.array([1.0, 2.0])
    v = np.array([0.5, -1.0])
    w = symmetrize_sampler(e, p, ConstantSampler(e, p + v))
    x = w.sample(make_rng(2), 4000)
    plus = np.all(np.isclose(x, p + v), axis=1)
    minus = np.all(np.isclose(x, p - v), axis=1)
    assert np.all(plus | minus)
    assert abs(plus.mean() - 0.5) < 3 * 0.5 / math.sqrt(4000)


def test_symmetrize_needs_smooth_space():
    tree, pts = build_figure1_tree(1)
    with pytest.raises((FrechetError, NotSmoothError)):
        symmetrize_sampler(TreeSpace(tree), pts[0], None)


def mean_log(space, p, x):
    V = space.log_many(p, x)
    m = V.mean(axis=0)
    se = np.sqrt(np.sum(V.var(axis=0, ddof=1)) / len(V))
    return float(np.linalg.norm(m)), float(se)


def test_symmetrized_cap_has_center_p():
    s = Sphere(2, 1.0)
    p = s.pole()
    q = s.exp(p, np.array([0.3, 0.0, 0.0]))
    base = UniformCapSampler(s, q, 0.2)
    x = symmetrize_sampler(s, p, base).sample(make_rng(3), 10_000)
    norm, _ = mean_log(s, p, x)
    sigma = math.sqrt(np.mean(s.distances(p, x) ** 2))
    assert norm <= 3 * sigma / 100


def test_batch_barycenters_symmetric():
    s = Sphere(2, 1.0)
    p = s.pole()
    q = s.exp(p, np.array([0.2, 0.1, 0.0]))
    w = symmetrize_sampler(s, p, UniformCapSampler(s, q, 0.1))
    rng = make_rng(4)
    ys = np.stack([empirical_barycenter(s, w.sample(rng, 5)).result for _ in range(2000)])
    norm, se = mean_log(s, p, ys)
    assert norm <= 3 * se
