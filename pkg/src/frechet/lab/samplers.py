"""Distributions with a known population barycenter.

Every sampler exposes ``sample(rng, size)``, its ``center`` (the barycenter,
by symmetry), ``sigma2`` (total variance if known in closed form, else
``None``), ``support_radius`` (``None`` when unbounded) and ``K2`` (a valid
sub-Gaussian parameter, ``None`` when unknown).
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate, special

from ..errors import DomainError, GeometryError

BISECT_TOL = 1e-12


def _check_rng(rng):
    if not isinstance(rng, np.random.Generator):
        raise TypeError("rng must be a numpy Generator")


class Sampler:
    space = None
    center = None
    sigma2 = None
    support_radius = None
    K2 = None

    def sample(self, rng, size):
        raise NotImplementedError


class ConstantSampler(Sampler):
    def __init__(self, space, point):
        self.space = space
        self.center = point
        self.sigma2 = 0.0
        self.support_radius = 0.0
        self.K2 = 0.0

    def sample(self, rng, size):
        if isinstance(self.center, np.ndarray):
            return np.repeat(self.center[None], size, axis=0)
        return [self.center] * size


def _unit_tangents(space, center, rng, size):
    basis = space.tangent_basis(center)
    c = rng.standard_normal((size, len(basis)))
    c /= np.linalg.norm(c, axis=1, keepdims=True)
    return np.tensordot(c, basis, axes=1)


def _push(space, center, V):
    return space.exp_many(center, V)


class GaussianSampler(Sampler):
    """Tangent Gaussian ``exp_p(scale * Z)`` with ``Z`` standard normal in an orthonormal frame.

    In flat space this is ``N(p, scale^2 I)``, whose 1-Lipschitz images are
    ``scale^2``-sub-Gaussian.  Not available on the sphere (unbounded support).
    """

    def __init__(self, space, center, scale=1.0):
        if space.name not in ("euclidean", "hyperbolic", "spd"):
            raise GeometryError(f"gaussian sampler is not available on '{space.name}'")
        self.space = space
        self.center = space.validate_point(center)
        self.scale = float(scale)
        self.sigma2 = space.manifold_dim * self.scale**2
        self.K2 = self.scale**2 if space.name == "euclidean" else None

    def sample(self, rng, size):
        basis = self.space.tangent_basis(self.center)
        z = rng.standard_normal((size, len(basis))) * self.scale
        return _push(self.space, self.center, np.tensordot(z, basis, axes=1))


def _radial_density_cdf(space, r):
    """Unnormalised radial volume CDF ``t -> int_0^t J(s) ds`` (vectorised) and its value at ``r``."""
    d = space.manifold_dim
    m = d - 1
    if space.name == "euclidean":
        return (lambda t: t**d / d), r**d / d
    if space.name == "sphere":
        sk = math.sqrt(space.kappa)
        if m == 0:
            f = lambda t: np.asarray(t, dtype=float)
        else:
            a = (m + 1) / 2.0
            beta = special.beta(a, 0.5)
            # int_0^x sin^m = beta/2 * I_{sin^2 x}(a, 1/2) for x <= pi/2
            f = lambda t: 0.5 * beta * special.betainc(a, 0.5, np.sin(sk * np.asarray(t)) ** 2) / sk ** (m + 1)
        return f, float(f(r))
    if space.name == "hyperbolic":
        sk = math.sqrt(-space.kappa)
        nodes, weights = np.polynomial.legendre.leggauss(64)

        def f(t):
            t = np.asarray(t, dtype=float)
            s = 0.5 * t[..., None] * (nodes + 1.0)
            vals = (np.sinh(sk * s) / sk) ** m
            return 0.5 * t * np.sum(weights * vals, axis=-1)

        return f, float(f(r))
    raise GeometryError(f"uniform geodesic balls are not available on '{space.name}'")


def sample_radius(space, r, u):
    """Inverse radial CDF of the uniform ball of radius ``r``, at uniforms ``u``."""
    d = space.manifold_dim
    u = np.asarray(u, dtype=float)
    if space.name == "euclidean":
        return r * u ** (1.0 / d)
    if space.name == "sphere" and d == 2:
        sk = math.sqrt(space.kappa)
        return np.arccos(1.0 - u * (1.0 - math.cos(sk * r))) / sk
    cdf, total = _radial_density_cdf(space, r)
    target = u * total
    lo = np.zeros_like(u)
    hi = np.full_like(u, r)
    while np.max(hi - lo) > BISECT_TOL * max(r, 1.0):
        mid = 0.5 * (lo + hi)
        below = cdf(mid) < target
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


class UniformCapSampler(Sampler):
    """Uniform law (Riemannian volume) on the geodesic ball ``B(center, r)``."""

    def __init__(self, space, center, r):
        if r < 0:
            raise DomainError("radius must be >= 0")
        if space.name == "sphere" and not r < math.pi / (2 * math.sqrt(space.kappa)):
            raise DomainError("cap radius must be below a quarter great circle")
        self.space = space
        self.center = space.validate_point(center)
        self.r = float(r)
        self.support_radius = self.r
        self.K2 = 4.0 * self.r**2
        self.sigma2 = self._variance()

    def _variance(self):
        if self.r == 0:
            return 0.0
        d = self.space.manifold_dim
        if self.space.name == "euclidean":
            return d / (d + 2.0) * self.r**2
        _radial_density_cdf(self.space, self.r)  # raises for unsupported spaces
        if self.space.name == "sphere":
            sk = math.sqrt(self.space.kappa)
            dens = lambda t: (math.sin(sk * t) / sk) ** (d - 1)
        else:
            sk = math.sqrt(-self.space.kappa)
            dens = lambda t: (math.sinh(sk * t) / sk) ** (d - 1)
        num = integrate.quad(lambda t: t * t * dens(t), 0, self.r, epsabs=0, epsrel=1e-13)[0]
        den = integrate.quad(dens, 0, self.r, epsabs=0, epsrel=1e-13)[0]
        return num / den

    def sample(self, rng, size):
        dirs = _unit_tangents(self.space, self.center, rng, size)
        t = sample_radius(self.space, self.r, rng.random(size))
        return _push(self.space, self.center, dirs * t[:, None])


class TwoPointSampler(Sampler):
    """``exp_p(+r u)`` or ``exp_p(-r u)`` with probability 1/2 each."""

    def __init__(self, space, center, r, direction=None):
        self.space = space
        self.center = space.validate_point(center)
        if direction is None:
            direction = space.tangent_basis(self.center)[0]
        u = np.asarray(direction, dtype=float)
        nu = space.norm(self.center, u)
        if nu == 0:
            raise GeometryError("direction must be nonzero")
        self.u = u / nu
        self.r = float(r)
        self.plus = space.exp(self.center, self.r * self.u)
        self.minus = space.exp(self.center, -self.r * self.u)
        self.sigma2 = self.r**2
        self.support_radius = self.r
        self.K2 = 4.0 * self.r**2

    def sample(self, rng, size):
        pick = rng.random(size) < 0.5
        return np.where(pick.reshape((-1,) + (1,) * self.plus.ndim), self.plus, self.minus)


class TreeLeafSampler(Sampler):
    """Categorical law on a list of tree loci."""

    def __init__(self, space, leaves, weights=None, center=None):
        self.space = space
        self.leaves = [space.validate_point(x) for x in leaves]
        w = np.ones(len(self.leaves)) if weights is None else np.asarray(weights, dtype=float)
        if len(w) != len(self.leaves) or np.any(w < 0) or w.sum() <= 0:
            raise DomainError("weights must be nonnegative with positive sum")
        self.weights = w / w.sum()
        if center is None:
            center = space.exact_barycenter(self.leaves, self.weights)
        self.center = center
        d = space.distances(center, self.leaves)
        self.sigma2 = float(self.weights @ d**2)
        self.support_radius = float(np.max(d[self.weights > 0]))
        self.K2 = 4.0 * self.support_radius**2

    def sample(self, rng, size):
        idx = rng.choice(len(self.leaves), size=size, p=self.weights)
        return [self.leaves[i] for i in idx]


def sample_uniform_cap(space, center, r, rng):
    _check_rng(rng)
    return UniformCapSampler(space, center, r).sample(rng, 1)[0]


def sample_two_point(space, p, direction, r, rng):
    _check_rng(rng)
    return TwoPointSampler(space, p, r, direction).sample(rng, 1)[0]


def sample_tree_leaves(space, leaves, weights, rng):
    _check_rng(rng)
    return TreeLeafSampler(space, leaves, weights).sample(rng, 1)[0]


def estimate_total_variance(space, sampler, b_star, n_mc, rng):
    """Monte Carlo mean of ``d(X, b*)^2`` and its standard error."""
    x = sampler.sample(rng, n_mc)
    d2 = space.distances(b_star, x) ** 2
    se = float(np.std(d2, ddof=1) / math.sqrt(n_mc)) if n_mc > 1 else 0.0
    return float(np.mean(d2)), se
