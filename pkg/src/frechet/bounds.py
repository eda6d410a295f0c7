"""Closed-form constants, error bounds and PAC sample sizes.

Conventions: ``kappa <= 0`` always takes the nonpositive-curvature branch
(``alpha = 2``, ``L = 1``, ``A = 2``).  ``epsilon`` is required when
``kappa > 0`` and must satisfy ``0 < epsilon sqrt(kappa) < pi/2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Sequence

from .errors import DomainError, MissingFieldError

# relative slack absorbed before rounding a sample size up
CEIL_RTOL = 1e-9


def _check_eps(kappa, epsilon):
    if kappa <= 0:
        return
    if epsilon is None:
        raise MissingFieldError("epsilon")
    x = epsilon * math.sqrt(kappa)
    if not 0 < x < math.pi / 2:
        raise DomainError(
            f"need 0 < epsilon*sqrt(kappa) < pi/2 (got epsilon={epsilon}, kappa={kappa})"
        )


def alpha_constant(kappa: float, epsilon: float | None = None) -> float:
    """Strong-convexity modulus of squared distances on the domain."""
    if kappa <= 0:
        return 2.0
    _check_eps(kappa, epsilon)
    sk = math.sqrt(kappa)
    return (math.pi - 2 * sk * epsilon) * math.tan(epsilon * sk)


def lipschitz_constant(kappa: float, epsilon: float | None = None) -> float:
    if kappa <= 0:
        return 1.0
    _check_eps(kappa, epsilon)
    return 2.0 / (epsilon**0.25 * kappa**0.125)


def expectation_constant(kappa: float, epsilon: float | None = None, heteroskedastic: bool = False) -> float:
    """``A`` (i.i.d.) or ``A~`` (independent, common barycenter)."""
    if kappa <= 0:
        return 2.0
    _check_eps(kappa, epsilon)
    a = 32.0 / (epsilon**0.25 * kappa**0.125 * alpha_constant(kappa, epsilon))
    return a * math.sqrt(2.0) if heteroskedastic else a


@dataclass
class BoundQuery:
    """Inputs shared by the bound evaluators; each evaluator names what it needs.

    ``sigma2`` and ``K2`` hold the mean parameters in heteroskedastic use.
    """

    n: int | None = None
    kappa: float = 0.0
    epsilon: float | None = None
    sigma2: float | None = None
    K2: float | None = None
    R: float | None = None
    delta: float | None = None
    heteroskedastic: bool = False

    def require(self, *names, bound=None):
        for name in names:
            if getattr(self, name) is None:
                raise MissingFieldError(name, bound)
        if "n" in names and self.n < 1:
            raise DomainError(f"n must be >= 1 (got {self.n})")
        if "delta" in names and not 0 < self.delta < 1:
            raise DomainError(f"delta must lie in (0, 1) (got {self.delta})")
        for name in ("sigma2", "K2", "R"):
            if name in names and getattr(self, name) < 0:
                raise DomainError(f"{name} must be >= 0")
        if self.kappa > 0:
            _check_eps(self.kappa, self.epsilon)

    def log_inv_delta(self):
        return math.log(1.0 / self.delta)

    def replace(self, **kw):
        vals = {f.name: getattr(self, f.name) for f in fields(self)}
        vals.update(kw)
        return BoundQuery(**vals)


def empirical_expectation_bound(q: BoundQuery) -> float:
    """``A sigma^2 / n`` for ``E d(b_hat_n, b*)^2``."""
    q.require("n", "sigma2", bound="empirical-exp")
    return expectation_constant(q.kappa, q.epsilon, q.heteroskedastic) * q.sigma2 / q.n


def iterated_expectation_bound(q: BoundQuery) -> float:
    """``sigma^2/n`` when ``kappa <= 0`` (harmonic steps), else ``32 sigma^2 / (alpha^2 (n+1))``."""
    q.require("n", "sigma2", bound="iterated-exp")
    if q.kappa <= 0:
        return q.sigma2 / q.n
    a = alpha_constant(q.kappa, q.epsilon)
    return 32.0 * q.sigma2 / (a * a * (q.n + 1))


# -- sub-Gaussian / sub-Gamma parameter arithmetic -----------------------


@dataclass(frozen=True)
class SubGammaParams:
    sigma2: float
    c: float

    def __post_init__(self):
        if not (math.isfinite(self.sigma2) and math.isfinite(self.c)):
            raise DomainError("sub-Gamma parameters must be finite")
        if self.sigma2 < 0 or self.c < 0:
            raise DomainError("sub-Gamma parameters must be nonnegative")


def subgaussian_of_bounded(C: float) -> float:
    """K^2 of a variable supported in a ball of radius ``C``."""
    if C < 0:
        raise DomainError("radius must be >= 0")
    return 4.0 * C * C


def subgaussian_tensorize(K2s: Sequence[float]) -> float:
    K2s = list(K2s)
    if not K2s:
        raise DomainError("need at least one sub-Gaussian parameter")
    if any(k < 0 for k in K2s):
        raise DomainError("sub-Gaussian parameters must be >= 0")
    return float(sum(K2s))


def subgaussian_compose(K2: float, L: float) -> float:
    """Parameter of ``Phi(X)`` for an ``L``-Lipschitz ``Phi``."""
    return L * L * K2


def subgamma_of_bounded(sigma_tilde2: float, R: float) -> SubGammaParams:
    """``sigma_tilde2 = E d(X, X')^2 / 2`` for an independent copy ``X'``."""
    return SubGammaParams(float(sigma_tilde2), float(R))


def subgamma_from_variance(sigma2: float, R: float) -> SubGammaParams:
    """Weakened parameters ``(2 sigma^2, R)`` when only the variance is known."""
    return SubGammaParams(2.0 * sigma2, float(R))


def subgamma_tail(p: SubGammaParams, delta: float) -> float:
    if not 0 < delta <= 1:
        raise DomainError(f"delta must lie in (0, 1] (got {delta})")
    lg = math.log(1.0 / delta)
    return math.sqrt(p.sigma2) * math.sqrt(2.0 * lg) + p.c * lg


# -- high-probability bounds ---------------------------------------------

TAIL_FLAVORS = ("subgaussian", "hoeffding", "bernstein")


def empirical_tail_bound(q: BoundQuery, flavor: str = "subgaussian", strict_paper: bool = False) -> float:
    """High-probability bound on ``d(b_hat_n, b*)``.

    The leading term is ``sqrt(A~) sigma_bar / sqrt(n)`` for every flavor.
    With ``strict_paper=True`` the Hoeffding and Bernstein variants use
    ``A~ sigma_bar / sqrt(n)`` instead.
    """
    if flavor not in TAIL_FLAVORS:
        raise DomainError(f"unknown tail flavor '{flavor}'")
    q.require("n", "sigma2", "delta", bound=f"tail-{flavor}")
    at = expectation_constant(q.kappa, q.epsilon, heteroskedastic=True)
    L = lipschitz_constant(q.kappa, q.epsilon)
    sbar = math.sqrt(q.sigma2)
    lg = q.log_inv_delta()
    lead = (at if strict_paper and flavor != "subgaussian" else math.sqrt(at)) * sbar / math.sqrt(q.n)
    if flavor == "subgaussian":
        if q.K2 is None:
            if q.R is None:
                raise MissingFieldError("K2", "tail-subgaussian")
            K2 = subgaussian_of_bounded(q.R)
        else:
            q.require("K2", bound="tail-subgaussian")
            K2 = q.K2
        return lead + L * math.sqrt(K2) * math.sqrt(lg / q.n)
    q.require("R", bound=f"tail-{flavor}")
    if flavor == "hoeffding":
        return lead + 2 * L * q.R * math.sqrt(lg / q.n)
    return lead + 2 * L * sbar * math.sqrt(lg / q.n) + L * q.R * lg / q.n


def iterated_tail_bound_cat0(q: BoundQuery, flavor: str = "subgaussian") -> float:
    """Bounds (i) sub-Gaussian, (ii) Hoeffding, (iii) Bernstein for harmonic steps, ``kappa <= 0``."""
    if flavor not in TAIL_FLAVORS:
        raise DomainError(f"unknown tail flavor '{flavor}'")
    if q.kappa > 0:
        raise DomainError("iterated tail bounds are only available for kappa <= 0")
    q.require("n", "sigma2", "delta", bound="iterated-tail")
    sbar = math.sqrt(q.sigma2)
    lg = q.log_inv_delta()
    lead = sbar / math.sqrt(q.n)
    if flavor == "subgaussian":
        q.require("K2", bound="iterated-tail")
        return lead + math.sqrt(q.K2) * math.sqrt(lg / q.n)
    q.require("R", bound="iterated-tail")
    if flavor == "hoeffding":
        return lead + 2 * q.R * math.sqrt(lg / q.n)
    return lead + 2 * sbar * math.sqrt(lg / q.n) + q.R * lg / q.n


def riemannian_tail_bound(q: BoundQuery, case: str = "bounded", alpha: float | None = None) -> float:
    """Tail bounds for smooth spaces.

    ``unbounded``: ``K sigma / sqrt(n) + K sqrt(log(1/delta)/n)`` with ``K = sqrt(K2)``.
    ``bounded``: ``sigma / (alpha sqrt(n)) + (2 R / alpha) sqrt(log(1/delta)/n)``;
    ``alpha`` defaults to :func:`alpha_constant` of the query.
    """
    if case == "unbounded":
        q.require("n", "sigma2", "K2", "delta", bound="riemannian-tail")
        K = math.sqrt(q.K2)
        return K * math.sqrt(q.sigma2) / math.sqrt(q.n) + K * math.sqrt(q.log_inv_delta() / q.n)
    if case == "bounded":
        q.require("n", "sigma2", "R", "delta", bound="riemannian-tail")
        a = alpha_constant(q.kappa, q.epsilon) if alpha is None else alpha
        if not a > 0:
            raise DomainError("alpha must be > 0")
        return math.sqrt(q.sigma2) / (a * math.sqrt(q.n)) + (2 * q.R / a) * math.sqrt(q.log_inv_delta() / q.n)
    raise DomainError(f"unknown case '{case}' (choose unbounded or bounded)")


# -- PAC sample sizes ----------------------------------------------------


def _ceil(x: float) -> int:
    return int(math.ceil(x * (1.0 - CEIL_RTOL)))


def _check_pac(eps, delta):
    if not eps > 0:
        raise DomainError("eps must be > 0")
    if not 0 < delta < 1:
        raise DomainError(f"delta must lie in (0, 1) (got {delta})")


def sample_size_hoeffding(D: float, eps: float, delta: float) -> int:
    _check_pac(eps, delta)
    return _ceil(4.0 * D * D / (eps * eps) * max(1.0, math.log(1.0 / delta)))


def sample_size_bernstein(sigma_tilde2: float, D: float, eps: float, delta: float) -> int:
    _check_pac(eps, delta)
    return _ceil(16.0 / 3.0 * max(sigma_tilde2 / eps**2, D / eps) * max(1.0, math.log(1.0 / delta)))


def hoeffding_pac_radius(D: float, m: int, delta: float) -> float:
    """Error level guaranteed after ``m`` resampled steps: ``D (1 + sqrt(log(1/delta))) / sqrt(m)``."""
    return D / math.sqrt(m) * (1.0 + math.sqrt(math.log(1.0 / delta)))
