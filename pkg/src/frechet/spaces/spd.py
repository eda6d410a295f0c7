import numpy as np

from ..errors import GeometryError
from .base import RiemannianSpace

EIG_FLOOR = 1e-12
SYM_TOL = 1e-10


def sym(a):
    return 0.5 * (a + np.swapaxes(a, -1, -2))


def _eigh(a):
    w, v = np.linalg.eigh(sym(a))
    top = np.max(w, axis=-1, keepdims=True)
    if np.any(top <= 0) or np.any(w <= EIG_FLOOR * top):
        raise GeometryError("matrix is not positive definite (eigenvalue below 1e-12 * largest)")
    return w, v


def spd_fun(a, f):
    """Apply the scalar function ``f`` to the spectrum of SPD matrix ``a``."""
    w, v = _eigh(a)
    return sym((v * f(w)[..., None, :]) @ np.swapaxes(v, -1, -2))


def sym_fun(a, f):
    """Spectral function of a symmetric (not necessarily definite) matrix."""
    w, v = np.linalg.eigh(sym(a))
    return sym((v * f(w)[..., None, :]) @ np.swapaxes(v, -1, -2))


class SPD(RiemannianSpace):
    """Symmetric positive definite ``d x d`` matrices, affine-invariant metric.

    ``d(A, B) = ||log(A^{-1/2} B A^{-1/2})||_F``; nonpositively curved.
    """

    name = "spd"
    kappa = 0.0

    def __init__(self, dim: int):
        if dim < 1:
            raise GeometryError("dimension must be >= 1")
        self.dim = int(dim)

    def __repr__(self):
        return f"SPD(dim={self.dim})"

    @property
    def manifold_dim(self):
        return self.dim * (self.dim + 1) // 2

    def validate_point(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape == (self.dim * self.dim,):
            x = x.reshape(self.dim, self.dim)
        if x.shape != (self.dim, self.dim):
            raise GeometryError(f"expected a {self.dim}x{self.dim} matrix, got {x.shape}")
        if not np.all(np.isfinite(x)):
            raise GeometryError("matrix has non-finite entries")
        if np.max(np.abs(x - x.T)) > SYM_TOL * max(1.0, np.max(np.abs(x))):
            raise GeometryError("matrix is not symmetric")
        _eigh(x)
        return sym(x)

    def _halves(self, a):
        w, v = _eigh(a)
        vt = v.T
        s = sym((v * np.sqrt(w)) @ vt)
        isq = sym((v / np.sqrt(w)) @ vt)
        return s, isq

    def _whiten(self, isq, b):
        return sym(isq @ b @ isq)

    def distance(self, x, y):
        _, isq = self._halves(x)
        w, _ = _eigh(self._whiten(isq, np.asarray(y)))
        return float(np.sqrt(np.sum(np.log(w) ** 2)))

    def distances(self, x, points):
        _, isq = self._halves(x)
        w, _ = _eigh(self._whiten(isq, np.asarray(points)))
        return np.sqrt(np.sum(np.log(w) ** 2, axis=-1))

    def log(self, x, y):
        s, isq = self._halves(x)
        return sym(s @ spd_fun(self._whiten(isq, y), np.log) @ s)

    def log_many(self, x, points):
        s, isq = self._halves(x)
        return sym(s @ spd_fun(self._whiten(isq, np.asarray(points)), np.log) @ s)

    def exp(self, x, v):
        s, isq = self._halves(x)
        return sym(s @ sym_fun(self._whiten(isq, v), np.exp) @ s)

    def interpolate(self, x, y, t):
        if t == 0:
            return x
        if t == 1:
            return y
        s, isq = self._halves(x)
        return sym(s @ spd_fun(self._whiten(isq, y), lambda w: w**t) @ s)

    def point_symmetry(self, p, x):
        s, isq = self._halves(p)
        return sym(s @ spd_fun(self._whiten(isq, x), lambda w: 1.0 / w) @ s)

    def inner(self, x, u, v):
        xi = np.linalg.inv(x)
        return float(np.trace(xi @ u @ xi @ v))

    def norm(self, x, v):
        _, isq = self._halves(x)
        return float(np.linalg.norm(isq @ v @ isq))

    def to_tangent(self, x, v):
        return sym(v)

    def tangent_basis(self, x):
        s, _ = self._halves(x)
        d = self.dim
        out = []
        for i in range(d):
            for j in range(i, d):
                e = np.zeros((d, d))
                if i == j:
                    e[i, i] = 1.0
                else:
                    e[i, j] = e[j, i] = 1.0 / np.sqrt(2.0)
                out.append(sym(s @ e @ s))
        return np.stack(out)

    def initial_guess(self, points):
        logs = spd_fun(np.asarray(points), np.log)
        return sym_fun(np.mean(logs, axis=0), np.exp)
