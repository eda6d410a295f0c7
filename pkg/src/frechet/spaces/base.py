"""Common interface for the concrete geodesic spaces.

Points of coordinate spaces are plain numpy arrays; a collection of ``n``
points is stacked along a leading axis.  Tree points are :class:`TreeLocus`
values held in a list.  The space object owns the representation, so every
operation goes through it.
"""

from __future__ import annotations

import numpy as np

from ..errors import GeometryError, NotSmoothError
from ..geometry import GeometrySpec


class GeodesicSpace:
    """A uniquely geodesic metric space (on the domains the library uses)."""

    name = "abstract"
    smooth = False
    kappa = 0.0

    @property
    def geometry(self) -> GeometrySpec:
        return GeometrySpec(self.kappa, self.manifold_dim)

    @property
    def manifold_dim(self):
        return None

    # -- point containers -------------------------------------------------
    def validate_point(self, x):
        raise NotImplementedError

    def as_points(self, seq):
        """Validate and pack a sequence of points into this space's container."""
        pts = [self.validate_point(p) for p in seq]
        if not pts:
            raise GeometryError("empty point set")
        return np.stack(pts)

    def take(self, points, idx):
        return points[np.asarray(idx, dtype=int)]

    def points_close(self, x, y, atol=1e-10):
        return self.distance(x, y) <= atol

    # -- metric -----------------------------------------------------------
    def distance(self, x, y) -> float:
        raise NotImplementedError

    def distances(self, x, points) -> np.ndarray:
        return np.array([self.distance(x, p) for p in points], dtype=float)

    def interpolate(self, x, y, t):
        raise NotImplementedError

    def initial_guess(self, points):
        return points[0]

    def project_to_ball(self, center, r, x):
        """Metric projection of ``x`` onto the closed ball ``B(center, r)``."""
        d = self.distance(center, x)
        if d <= r:
            return x
        return self.interpolate(center, x, r / d)

    # -- smooth structure (overridden by Riemannian spaces) ---------------
    def _not_smooth(self, what):
        raise NotSmoothError(f"{what} is undefined on the non-smooth space '{self.name}'")

    def log(self, x, y):
        self._not_smooth("log")

    def exp(self, x, v):
        self._not_smooth("exp")

    def point_symmetry(self, p, x):
        self._not_smooth("point symmetry")


class RiemannianSpace(GeodesicSpace):
    """Smooth space with closed-form exponential and logarithm maps."""

    smooth = True

    def log_many(self, x, points):
        return np.stack([self.log(x, p) for p in points])

    def exp_many(self, x, vs):
        return np.stack([self.exp(x, v) for v in vs])

    def inner(self, x, u, v) -> float:
        return float(np.sum(u * v))

    def norm(self, x, v) -> float:
        return float(np.sqrt(max(self.inner(x, v, v), 0.0)))

    def to_tangent(self, x, v):
        return v

    def tangent_basis(self, x):
        """Orthonormal basis of the tangent space at ``x``, stacked on axis 0."""
        raise NotImplementedError

    def random_unit_tangent(self, x, rng):
        basis = self.tangent_basis(x)
        c = rng.standard_normal(len(basis))
        c /= np.linalg.norm(c)
        return np.tensordot(c, basis, axes=1)

    def interpolate(self, x, y, t):
        if t == 0:
            return x
        if t == 1:
            return y
        return self.exp(x, t * self.log(x, y))

    def point_symmetry(self, p, x):
        return self.exp(p, -self.log(p, x))
