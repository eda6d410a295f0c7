import numpy as np

from ..errors import GeometryError
from .base import RiemannianSpace


class Euclidean(RiemannianSpace):
    """Flat space R^d."""

    name = "euclidean"
    kappa = 0.0

    def __init__(self, dim: int):
        if dim < 1:
            raise GeometryError("dimension must be >= 1")
        self.dim = int(dim)

    def __repr__(self):
        return f"Euclidean(dim={self.dim})"

    @property
    def manifold_dim(self):
        return self.dim

    def validate_point(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise GeometryError(f"expected a point of shape ({self.dim},), got {x.shape}")
        if not np.all(np.isfinite(x)):
            raise GeometryError("point has non-finite coordinates")
        return x

    def distance(self, x, y):
        return float(np.linalg.norm(np.asarray(y) - np.asarray(x)))

    def distances(self, x, points):
        return np.linalg.norm(np.asarray(points) - x, axis=-1)

    def interpolate(self, x, y, t):
        return x + t * (y - x)

    def log(self, x, y):
        return y - x

    def log_many(self, x, points):
        return np.asarray(points) - x

    def exp(self, x, v):
        return x + v

    def exp_many(self, x, vs):
        return x + np.asarray(vs)

    def point_symmetry(self, p, x):
        return 2 * p - x

    def interpolate_rows(self, X, Y, t):
        return X + t * (Y - X)

    def tangent_basis(self, x):
        return np.eye(self.dim)

    def initial_guess(self, points):
        return np.mean(points, axis=0)
