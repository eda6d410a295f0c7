import math

import numpy as np

from ..errors import GeometryError
from .base import RiemannianSpace


def minkowski(u, v):
    """Lorentzian form ``u_1 v_1 + ... + u_d v_d - u_{d+1} v_{d+1}`` (batched on axis -1)."""
    u = np.asarray(u)
    v = np.asarray(v)
    return np.sum(u[..., :-1] * v[..., :-1], axis=-1) - u[..., -1] * v[..., -1]


class Hyperbolic(RiemannianSpace):
    """Hyperboloid model of curvature ``kappa < 0`` in R^(dim+1).

    Points satisfy ``<x, x> = 1/kappa`` for the Lorentzian form with positive
    last coordinate.  Distances are evaluated through the Poincare ball
    coordinates, which avoids the cancellation in ``arccosh`` near zero.
    """

    name = "hyperbolic"

    def __init__(self, dim: int = 2, kappa: float = -1.0, rtol: float = 1e-12):
        if dim < 1:
            raise GeometryError("dimension must be >= 1")
        if not kappa < 0:
            raise GeometryError(f"hyperbolic curvature must be < 0 (got {kappa})")
        self.dim = int(dim)
        self.kappa = float(kappa)
        self.radius = 1.0 / math.sqrt(-kappa)
        self.rtol = rtol

    def __repr__(self):
        return f"Hyperbolic(dim={self.dim}, kappa={self.kappa})"

    @property
    def manifold_dim(self):
        return self.dim

    def validate_point(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim + 1,):
            raise GeometryError(f"expected ambient shape ({self.dim + 1},), got {x.shape}")
        if not np.all(np.isfinite(x)):
            raise GeometryError("point has non-finite coordinates")
        if not x[-1] > 0:
            raise GeometryError("last coordinate must be positive")
        # relative to the magnitude of the cancelling terms
        scale = max(1.0, (x[-1] / self.radius) ** 2)
        if abs(minkowski(x, x) * (-self.kappa) + 1.0) > self.rtol * scale:
            raise GeometryError("point does not lie on the hyperboloid")
        return x

    def origin(self):
        e = np.zeros(self.dim + 1)
        e[-1] = self.radius
        return e

    def lift(self, spatial):
        """Point of the hyperboloid with the given first ``dim`` coordinates."""
        s = np.asarray(spatial, dtype=float)
        return np.append(s, math.sqrt(self.radius**2 + float(s @ s)))

    def _angles(self, x, pts):
        x = np.asarray(x, dtype=float) / self.radius
        pts = np.asarray(pts, dtype=float) / self.radius
        px = x[:-1] / (1.0 + x[-1])
        pp = pts[..., :-1] / (1.0 + pts[..., -1:])
        gap = np.linalg.norm(pp - px, axis=-1)
        return 2.0 * np.arcsinh(0.5 * gap * np.sqrt((1.0 + x[-1]) * (1.0 + pts[..., -1])))

    def distance(self, x, y):
        return float(self.radius * self._angles(x, y))

    def distances(self, x, points):
        return self.radius * self._angles(x, points)

    def log(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        theta = float(self._angles(x, y))
        if theta == 0.0:
            return np.zeros_like(x)
        w = y - (self.kappa * minkowski(x, y)) * x
        return (theta / math.sinh(theta)) * w

    def log_many(self, x, points):
        points = np.asarray(points, dtype=float)
        theta = self._angles(x, points)
        w = points - np.outer(self.kappa * minkowski(points, x), x)
        safe = np.where(theta > 0, theta, 1.0)
        scale = np.where(theta > 0, theta / np.sinh(safe), 0.0)
        return w * scale[:, None]

    def interpolate_rows(self, X, Y, t):
        """Row-wise ``interpolate(X[i], Y[i], t)`` for stacked point arrays."""
        Xu = X / self.radius
        Yu = Y / self.radius
        px = Xu[:, :-1] / (1.0 + Xu[:, -1:])
        py = Yu[:, :-1] / (1.0 + Yu[:, -1:])
        gap = np.sqrt(np.sum((py - px) ** 2, axis=-1))
        theta = 2.0 * np.arcsinh(0.5 * gap * np.sqrt((1.0 + Xu[:, -1]) * (1.0 + Yu[:, -1])))
        W = Yu + minkowski(Xu, Yu)[:, None] * Xu
        nw = np.sinh(theta)
        a = t * theta
        coef = np.divide(np.sinh(a), nw, out=np.zeros_like(nw), where=nw > 0)
        Z = np.cosh(a)[:, None] * Xu + coef[:, None] * W
        Z[:, -1] = np.sqrt(1.0 + np.sum(Z[:, :-1] ** 2, axis=-1))
        return self.radius * Z

    def _fix(self, y):
        y = np.array(y, dtype=float)
        y[-1] = math.sqrt(self.radius**2 + float(y[:-1] @ y[:-1]))
        return y

    def exp(self, x, v):
        x = np.asarray(x, dtype=float)
        v = np.asarray(v, dtype=float)
        nv = math.sqrt(max(float(minkowski(v, v)), 0.0))
        if nv == 0.0:
            return x.copy()
        a = nv / self.radius
        return self._fix(math.cosh(a) * x + (self.radius * math.sinh(a) / nv) * v)

    def exp_many(self, x, vs):
        vs = np.asarray(vs, dtype=float)
        nv = np.sqrt(np.maximum(minkowski(vs, vs), 0.0))
        a = nv / self.radius
        coef = np.divide(self.radius * np.sinh(a), nv, out=np.zeros_like(nv), where=nv > 0)
        y = np.cosh(a)[:, None] * x + coef[:, None] * vs
        y[:, -1] = np.sqrt(self.radius**2 + np.sum(y[:, :-1] ** 2, axis=-1))
        return y

    def inner(self, x, u, v):
        return float(minkowski(u, v))

    def to_tangent(self, x, v):
        return v - (self.kappa * minkowski(x, v)) * x

    def tangent_basis(self, x):
        x = np.asarray(x, dtype=float)
        basis = []
        for e in np.eye(self.dim + 1):
            v = self.to_tangent(x, e)
            for b in basis:
                v = v - minkowski(v, b) * b
            n2 = minkowski(v, v)
            if n2 > 1e-10:
                basis.append(v / math.sqrt(n2))
            if len(basis) == self.dim:
                break
        return np.stack(basis)

    def initial_guess(self, points):
        m = np.mean(points, axis=0)
        return self._fix(m * (self.radius / math.sqrt(-float(minkowski(m, m)))))
