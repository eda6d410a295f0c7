import math

import numpy as np

from ..errors import GeodesicNotUnique, GeometryError
from .base import RiemannianSpace

# angular slack below pi within which two points count as antipodal
ANTIPODAL_TOL = 1e-9


class Sphere(RiemannianSpace):
    """Sphere of curvature ``kappa > 0`` embedded in R^(dim+1).

    Points are ambient vectors of norm ``1/sqrt(kappa)``.  Distances use the
    ``2 atan2(|x - y|, |x + y|)`` form of the arc length, which stays accurate
    for nearly equal and nearly antipodal pairs where ``arccos`` loses digits.
    """

    name = "sphere"

    def __init__(self, dim: int = 2, kappa: float = 1.0, rtol: float = 1e-12):
        if dim < 1:
            raise GeometryError("dimension must be >= 1")
        if not kappa > 0:
            raise GeometryError(f"sphere curvature must be > 0 (got {kappa})")
        self.dim = int(dim)
        self.kappa = float(kappa)
        self.radius = 1.0 / math.sqrt(kappa)
        self.rtol = rtol

    def __repr__(self):
        return f"Sphere(dim={self.dim}, kappa={self.kappa})"

    @property
    def manifold_dim(self):
        return self.dim

    def validate_point(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim + 1,):
            raise GeometryError(f"expected ambient shape ({self.dim + 1},), got {x.shape}")
        if not np.all(np.isfinite(x)):
            raise GeometryError("point has non-finite coordinates")
        nrm = np.linalg.norm(x)
        if abs(nrm - self.radius) > self.rtol * self.radius:
            raise GeometryError(
                f"point norm {nrm!r} differs from sphere radius {self.radius!r}"
            )
        return x

    def _angles(self, x, pts):
        x = x / self.radius
        pts = pts / self.radius
        a = np.linalg.norm(pts - x, axis=-1)
        b = np.linalg.norm(pts + x, axis=-1)
        return 2.0 * np.arctan2(a, b)

    def distance(self, x, y):
        return float(self.radius * self._angles(np.asarray(x), np.asarray(y)))

    def distances(self, x, points):
        return self.radius * self._angles(np.asarray(x), np.asarray(points))

    def _log_from_angle(self, x, y, theta):
        if theta > math.pi - ANTIPODAL_TOL:
            raise GeodesicNotUnique("antipodal points have no unique geodesic")
        w = y - (np.dot(x, y) * self.kappa) * x
        nw = np.linalg.norm(w)
        if theta == 0.0 or nw == 0.0:
            return np.zeros_like(x)
        return (self.radius * theta / nw) * w

    def log(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return self._log_from_angle(x, y, float(self._angles(x, y)))

    def log_many(self, x, points):
        points = np.asarray(points, dtype=float)
        theta = self._angles(x, points)
        if np.any(theta > math.pi - ANTIPODAL_TOL):
            raise GeodesicNotUnique("antipodal points have no unique geodesic")
        w = points - np.outer(points @ x * self.kappa, x)
        nw = np.linalg.norm(w, axis=-1)
        scale = np.divide(self.radius * theta, nw, out=np.zeros_like(nw), where=nw > 0)
        return w * scale[:, None]

    def exp(self, x, v):
        x = np.asarray(x, dtype=float)
        v = np.asarray(v, dtype=float)
        nv = np.linalg.norm(v)
        if nv == 0.0:
            return x.copy()
        if nv >= math.pi * self.radius:
            raise GeometryError(
                f"tangent norm {nv!r} reaches the model diameter {math.pi * self.radius!r}"
            )
        a = nv / self.radius
        y = math.cos(a) * x + (self.radius * math.sin(a) / nv) * v
        return y * (self.radius / np.linalg.norm(y))

    def exp_many(self, x, vs):
        vs = np.asarray(vs, dtype=float)
        nv = np.linalg.norm(vs, axis=-1)
        if np.any(nv >= math.pi * self.radius):
            raise GeometryError("tangent norm reaches the model diameter")
        a = nv / self.radius
        coef = np.divide(self.radius * np.sin(a), nv, out=np.zeros_like(nv), where=nv > 0)
        y = np.cos(a)[:, None] * x + coef[:, None] * vs
        return y * (self.radius / np.linalg.norm(y, axis=-1, keepdims=True))

    def interpolate(self, x, y, t):
        if t == 0:
            return x
        if t == 1:
            return y
        return self.exp(x, t * self.log(x, y))

    def interpolate_rows(self, X, Y, t):
        """Row-wise ``interpolate(X[i], Y[i], t)`` for stacked point arrays."""
        Xu = X / self.radius
        Yu = Y / self.radius
        theta = 2.0 * np.arctan2(
            np.sqrt(np.sum((Yu - Xu) ** 2, axis=-1)), np.sqrt(np.sum((Yu + Xu) ** 2, axis=-1))
        )
        if np.any(theta > math.pi - ANTIPODAL_TOL):
            raise GeodesicNotUnique("antipodal points have no unique geodesic")
        W = Yu - np.sum(Xu * Yu, axis=-1, keepdims=True) * Xu
        nw = np.sqrt(np.sum(W * W, axis=-1))
        a = t * theta
        coef = np.divide(np.sin(a), nw, out=np.zeros_like(nw), where=nw > 0)
        Z = np.cos(a)[:, None] * Xu + coef[:, None] * W
        Z /= np.sqrt(np.sum(Z * Z, axis=-1, keepdims=True))
        return self.radius * Z

    def to_tangent(self, x, v):
        return v - (np.dot(x, v) * self.kappa) * x

    def tangent_basis(self, x):
        # rows 1..dim of V^T span the orthogonal complement of x
        _, _, vt = np.linalg.svd(np.asarray(x, dtype=float).reshape(1, -1))
        return vt[1:]

    def initial_guess(self, points):
        m = np.mean(points, axis=0)
        nm = np.linalg.norm(m)
        if nm < 1e-12 * self.radius:
            return np.asarray(points[0], dtype=float)
        return m * (self.radius / nm)

    def pole(self):
        """The point ``(0, ..., 0, 1/sqrt(kappa))``."""
        e = np.zeros(self.dim + 1)
        e[-1] = self.radius
        return e
