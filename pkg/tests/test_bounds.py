import math

import numpy as np
import pytest

from frechet import bounds as B
from frechet.bounds import BoundQuery
from frechet.errors import DomainError, MissingFieldError

E1 = math.exp(-1)
NEAR_ONE = 1 - 1e-15


def close12(a, b):
    return a == pytest.approx(b, rel=1e-12, abs=1e-15)


# -- constants -------------------------------------------------------------


def test_alpha_examples():
    assert B.alpha_constant(-3, 0.7) == 2
    assert B.alpha_constant(-3) == 2
    assert close12(B.alpha_constant(1, math.pi / 4), math.pi / 2)
    a = B.alpha_constant(1, 0.1)
    assert 4 / math.pi * 0.1 <= a <= math.pi * 0.1


def test_alpha_sandwich_grid():
    rng = np.random.default_rng(4)
    ks = rng.uniform(0.01, 10, 1000)
    x = rng.uniform(1e-6, math.pi / 2 - 1e-6, 1000)
    for k, xx in zip(ks, x):
        eps = xx / math.sqrt(k)
        a = B.alpha_constant(k, eps)
        assert 4 / math.pi * xx * (1 - 1e-12) <= a <= math.pi * xx * (1 + 1e-12)
        assert 0 < a <= 2


def test_alpha_limits():
    for k in (0.5, 1.0, 3.0):
        sk = math.sqrt(k)
        assert abs(B.alpha_constant(k, (math.pi / 2 - 1e-7) / sk) - 2) <= 1e-6
        assert B.alpha_constant(k, 1e-6 / sk) < 1e-5


def test_alpha_domain_errors():
    with pytest.raises(DomainError):
        B.alpha_constant(1, math.pi / 2)
    with pytest.raises(DomainError):
        B.alpha_constant(1, 0.0)
    with pytest.raises(MissingFieldError):
        B.alpha_constant(1)


def test_lipschitz_examples():
    assert B.lipschitz_constant(0) == 1
    assert B.lipschitz_constant(-1, 5) == 1
    assert close12(B.lipschitz_constant(1, 1), 2)
    assert close12(B.lipschitz_constant(1, 1e-4), 20)


def test_expectation_constant_examples():
    for k in (0, -1):
        assert B.expectation_constant(k) == 2
        assert B.expectation_constant(k, heteroskedastic=True) == 2
    a = 32 / ((math.pi / 4) ** 0.25 * (math.pi / 2))
    assert close12(B.expectation_constant(1, math.pi / 4), a)
    assert close12(B.expectation_constant(1, math.pi / 4, True), math.sqrt(2) * a)


# -- expectation bounds ------------------------------------------------------


def test_empirical_expectation_examples():
    assert B.empirical_expectation_bound(BoundQuery(n=5, sigma2=0.0)) == 0
    assert close12(B.empirical_expectation_bound(BoundQuery(n=100, sigma2=5.0)), 0.1)
    q = BoundQuery(n=10, kappa=1, epsilon=math.pi / 4, sigma2=1.0)
    assert close12(B.empirical_expectation_bound(q), B.expectation_constant(1, math.pi / 4) / 10)


def test_iterated_expectation_examples():
    assert close12(B.iterated_expectation_bound(BoundQuery(n=4, sigma2=1.0)), 0.25)
    q = BoundQuery(n=7, kappa=1, epsilon=math.pi / 4, sigma2=1.0)
    assert close12(B.iterated_expectation_bound(q), 32 / ((math.pi / 2) ** 2 * 8))
    assert B.iterated_expectation_bound(q.replace(sigma2=0.0)) == 0


def test_missing_fields_named():
    with pytest.raises(MissingFieldError, match="sigma2"):
        B.empirical_expectation_bound(BoundQuery(n=3))
    with pytest.raises(MissingFieldError, match="epsilon"):
        B.empirical_expectation_bound(BoundQuery(n=3, kappa=1.0, sigma2=1.0))
    with pytest.raises(DomainError):
        B.empirical_expectation_bound(BoundQuery(n=0, sigma2=1.0))


# -- parameter arithmetic ----------------------------------------------------


def test_subgaussian_examples():
    assert B.subgaussian_of_bounded(0) == 0
    assert B.subgaussian_of_bounded(1) == 4
    assert B.subgaussian_of_bounded(3) == 36
    with pytest.raises(DomainError):
        B.subgaussian_tensorize([])
    assert B.subgaussian_tensorize([1]) == 1
    assert B.subgaussian_tensorize([1, 2, 3]) == 6
    assert B.subgaussian_compose(7.0, 1) == 7.0
    assert B.subgaussian_compose(4, 0.5) == 1
    assert B.subgaussian_compose(2, 3) == 18


def test_compose_tensorize_commute():
    rng = np.random.default_rng(1)
    for _ in range(100):
        ks = list(rng.uniform(0, 5, int(rng.integers(1, 10))))
        L = rng.uniform(0, 4)
        lhs = B.subgaussian_compose(B.subgaussian_tensorize(ks), L)
        rhs = B.subgaussian_tensorize([B.subgaussian_compose(k, L) for k in ks])
        assert lhs == pytest.approx(rhs, rel=1e-13)


def test_subgamma_examples():
    assert B.subgamma_of_bounded(0, 1) == B.SubGammaParams(0, 1)
    assert B.subgamma_of_bounded(2, 0.5) == B.SubGammaParams(2, 0.5)
    assert B.subgamma_from_variance(1.5, 2) == B.SubGammaParams(3.0, 2.0)
    assert B.subgamma_tail(B.SubGammaParams(1, 0), NEAR_ONE) < 1e-7
    assert close12(B.subgamma_tail(B.SubGammaParams(1, 0), math.exp(-2)), 2)
    assert close12(B.subgamma_tail(B.SubGammaParams(0, 1), E1), 1)
    with pytest.raises(DomainError):
        B.SubGammaParams(math.inf, 1)
    with pytest.raises(DomainError):
        B.SubGammaParams(-1, 1)


def test_sigma_tilde_at_most_twice_variance():
    rng = np.random.default_rng(2)
    for _ in range(20):
        x = rng.standard_normal((200, 3)) * rng.uniform(0.1, 3)
        s2 = np.mean(np.sum((x - x.mean(0)) ** 2, axis=1))
        d2 = np.sum((x[:, None] - x[None]) ** 2, axis=-1)
        st2 = d2.sum() / (2 * len(x) ** 2)
        # equality for the empirical measure in a Hilbert space
        assert st2 <= 2 * s2 * (1 + 1e-12)


# -- tail bounds ---------------------------------------------------------------


def test_empirical_tail_examples():
    q = BoundQuery(n=100, sigma2=1.0, K2=4.0, delta=E1)
    assert close12(B.empirical_tail_bound(q, "subgaussian"), math.sqrt(2) / 10 + 2 / 10)
    for flavor in B.TAIL_FLAVORS:
        v = B.empirical_tail_bound(q.replace(R=1.0, delta=NEAR_ONE), flavor)
        assert v == pytest.approx(math.sqrt(2) / 10, abs=1e-7)


def test_empirical_tail_flavors_formulas():
    q = BoundQuery(n=50, kappa=1.0, epsilon=0.5, sigma2=0.3, R=0.4, delta=0.05)
    at = B.expectation_constant(1.0, 0.5, True)
    L = B.lipschitz_constant(1.0, 0.5)
    lg = math.log(20)
    sb = math.sqrt(0.3)
    lead = math.sqrt(at) * sb / math.sqrt(50)
    assert close12(B.empirical_tail_bound(q, "hoeffding"), lead + 2 * L * 0.4 * math.sqrt(lg / 50))
    assert close12(
        B.empirical_tail_bound(q, "bernstein"),
        lead + 2 * L * sb * math.sqrt(lg / 50) + L * 0.4 * lg / 50,
    )
    # K2 falls back to 4 R^2
    assert close12(B.empirical_tail_bound(q, "subgaussian"), lead + L * 0.8 * math.sqrt(lg / 50))
    strict = B.empirical_tail_bound(q, "hoeffding", strict_paper=True)
    assert close12(strict - B.empirical_tail_bound(q, "hoeffding"), (at - math.sqrt(at)) * sb / math.sqrt(50))
    assert B.empirical_tail_bound(q, "subgaussian", strict_paper=True) == B.empirical_tail_bound(q, "subgaussian")


def test_empirical_tail_missing_and_unknown():
    with pytest.raises(MissingFieldError, match="R"):
        B.empirical_tail_bound(BoundQuery(n=5, sigma2=1.0, delta=0.1), "hoeffding")
    with pytest.raises(MissingFieldError, match="K2"):
        B.empirical_tail_bound(BoundQuery(n=5, sigma2=1.0, delta=0.1), "subgaussian")
    with pytest.raises(DomainError):
        B.empirical_tail_bound(BoundQuery(n=5, sigma2=1.0, delta=0.1, R=1), "chernoff")


def test_bernstein_below_hoeffding_when_sigma_small():
    rng = np.random.default_rng(3)
    for _ in range(100):
        R = rng.uniform(0.1, 5)
        n = int(rng.integers(1, 10_000))
        delta = rng.uniform(0.001, 0.5)
        q = BoundQuery(n=n, kappa=float(rng.choice([-1.0, 0.0, 1.0])), epsilon=0.3,
                       sigma2=(rng.uniform(0, 1) * R) ** 2 * 1e-2, R=R, delta=delta)
        # sigma well below R, and n large enough that R log/n is below the saving
        lg = q.log_inv_delta()
        if 2 * (R - math.sqrt(q.sigma2)) * math.sqrt(lg / n) < R * lg / n:
            continue
        assert B.empirical_tail_bound(q, "bernstein") <= B.empirical_tail_bound(q, "hoeffding")


def test_iterated_tail_examples():
    for flavor in B.TAIL_FLAVORS:
        q = BoundQuery(n=9, sigma2=4.0, K2=1.0, R=1.0, delta=NEAR_ONE)
        assert B.iterated_tail_bound_cat0(q, flavor) == pytest.approx(2 / 3, abs=1e-7)
    q = BoundQuery(n=4, sigma2=0.0, R=1.0, delta=E1)
    assert close12(B.iterated_tail_bound_cat0(q, "hoeffding"), 1)
    q = BoundQuery(n=4, sigma2=1.0, K2=9.0, delta=E1)
    assert close12(B.iterated_tail_bound_cat0(q, "subgaussian"), 0.5 + 1.5)
    with pytest.raises(DomainError):
        B.iterated_tail_bound_cat0(BoundQuery(n=4, kappa=1.0, epsilon=0.5, sigma2=1, R=1, delta=0.1), "hoeffding")


def test_iterated_bernstein_below_hoeffding_grid():
    rng = np.random.default_rng(5)
    checked = 0
    while checked < 200:
        R = rng.uniform(0.01, 10)
        sb = rng.uniform(0, R)
        n = int(rng.integers(1, 5000))
        delta = rng.uniform(1e-6, 0.99)
        lg = math.log(1 / delta)
        # (iii) - (ii) = 2 (sb - R) sqrt(lg/n) + R lg/n
        if math.sqrt(lg / n) > 2 * (1 - sb / R):
            continue
        q = BoundQuery(n=n, sigma2=sb * sb, R=R, delta=delta)
        assert B.iterated_tail_bound_cat0(q, "bernstein") <= B.iterated_tail_bound_cat0(q, "hoeffding") * (1 + 1e-12)
        checked += 1


def test_iterated_bernstein_can_exceed_hoeffding():
    # sb close to R: the extra R lg/n term is not offset
    q = BoundQuery(n=440, sigma2=2.1**2, R=2.13, delta=0.25)
    assert B.iterated_tail_bound_cat0(q, "bernstein") > B.iterated_tail_bound_cat0(q, "hoeffding")


def test_riemannian_examples():
    q = BoundQuery(n=4, sigma2=1.0, R=1.0, delta=E1)
    assert close12(B.riemannian_tail_bound(q, "bounded"), 0.25 + 0.5)
    q = BoundQuery(n=16, sigma2=4.0, K2=9.0, delta=NEAR_ONE)
    assert B.riemannian_tail_bound(q, "unbounded") == pytest.approx(3 * 2 / 4, abs=1e-7)
    q = BoundQuery(n=16, sigma2=0.0, R=2.0, delta=NEAR_ONE)
    assert B.riemannian_tail_bound(q, "bounded") == pytest.approx(0, abs=1e-7)
    q = BoundQuery(n=4, sigma2=1.0, R=1.0, delta=E1)
    assert close12(B.riemannian_tail_bound(q, "bounded", alpha=1.0), 0.5 + 1.0)
    with pytest.raises(DomainError):
        B.riemannian_tail_bound(q, "mixed")


# -- monotonicity ------------------------------------------------------------


def all_evaluators():
    return [
        ("emp-exp", B.empirical_expectation_bound),
        ("it-exp", B.iterated_expectation_bound),
        *[(f"tail-{f}", lambda q, f=f: B.empirical_tail_bound(q, f)) for f in B.TAIL_FLAVORS],
        *[(f"it-tail-{f}", lambda q, f=f: B.iterated_tail_bound_cat0(q, f)) for f in B.TAIL_FLAVORS],
        ("riem-unb", lambda q: B.riemannian_tail_bound(q, "unbounded")),
        ("riem-b", lambda q: B.riemannian_tail_bound(q, "bounded")),
    ]


@pytest.mark.parametrize("name, fn", all_evaluators(), ids=[n for n, _ in all_evaluators()])
def test_monotonicity(name, fn):
    rng = np.random.default_rng(11)
    for _ in range(50):
        kappa = 0.0 if "it-tail" in name else float(rng.choice([-1.0, 0.0, 1.0]))
        q = BoundQuery(n=int(rng.integers(1, 1000)), kappa=kappa, epsilon=rng.uniform(0.05, 1.5),
                       sigma2=rng.uniform(0.01, 4), K2=rng.uniform(0.01, 4), R=rng.uniform(0.01, 4),
                       delta=rng.uniform(0.01, 0.9))
        v = fn(q)
        assert fn(q.replace(n=q.n + 1)) <= v
        for field in ("sigma2", "K2", "R"):
            assert fn(q.replace(**{field: getattr(q, field) * 1.5})) >= v
        assert fn(q.replace(delta=q.delta / 2)) >= v


# -- sample sizes ----------------------------------------------------------


def test_sample_size_examples():
    assert B.sample_size_hoeffding(1, 0.1, E1) == 400
    assert B.sample_size_hoeffding(1, 0.1, 0.5) == 400
    assert B.sample_size_hoeffding(1, 0.1, math.exp(-4)) == 1600
    assert B.sample_size_bernstein(0.01, 1, 0.1, E1) == 54
    assert B.sample_size_bernstein(1, 1, 0.1, E1) == 534
    with pytest.raises(DomainError):
        B.sample_size_hoeffding(1, 0, 0.1)
    with pytest.raises(DomainError):
        B.sample_size_bernstein(1, 1, 0.1, 1.0)


def test_bernstein_smaller_when_spread_small():
    rng = np.random.default_rng(6)
    for _ in range(100):
        D = rng.uniform(0.5, 5)
        eps = rng.uniform(0.01, 0.1) * D
        st2 = rng.uniform(0, 0.05) * D * D
        delta = rng.uniform(0.001, 0.5)
        assert B.sample_size_bernstein(st2, D, eps, delta) < B.sample_size_hoeffding(D, eps, delta)


def test_hoeffding_self_consistency():
    rng = np.random.default_rng(8)
    for _ in range(1000):
        D = rng.uniform(0.01, 10)
        eps = rng.uniform(1e-3, 1) * D
        delta = math.exp(-rng.uniform(0.01, 10))
        m = B.sample_size_hoeffding(D, eps, delta)
        assert B.hoeffding_pac_radius(D, m, delta) <= eps * (1 + 1e-9)
