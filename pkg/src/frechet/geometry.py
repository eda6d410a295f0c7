"""Curvature metadata, convex-domain validation and geodesic sanity checks.

Every model space exposes a :class:`GeometrySpec` describing its curvature
upper bound ``kappa`` and the diameter ``d_kappa`` of the comparison model
space.  Convex domains are described by :class:`ConvexDomainSpec`; for
``kappa > 0`` the strong-convexity results only hold on balls of radius at
most ``(d_kappa / 2 - epsilon) / 2``, which :func:`validate_domain` checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .errors import DomainError

INF = math.inf
# relative slack on the non-strict radius inequality, so that a radius set
# exactly to (d_kappa/2 - epsilon)/2 survives rounding
DOMAIN_RTOL = 1e-12


def model_diameter(kappa: float) -> float:
    """Diameter of the model space of constant curvature ``kappa``.

    Returns ``pi / sqrt(kappa)`` for positive curvature and ``math.inf``
    otherwise.
    """
    if kappa > 0:
        return math.pi / math.sqrt(kappa)
    return INF


@dataclass(frozen=True)
class GeometrySpec:
    kappa: float
    dimension: int | None = None

    def __post_init__(self):
        if self.dimension is not None and self.dimension < 1:
            raise ValueError("dimension must be >= 1")

    @property
    def d_kappa(self) -> float:
        return model_diameter(self.kappa)


@dataclass(frozen=True)
class ConvexDomainSpec:
    """Ball ``B(center, radius)`` used as a convex domain.

    ``epsilon`` is only meaningful when the curvature bound is positive.
    """

    center: Any
    radius: float
    epsilon: float | None = None


@dataclass
class DomainReport:
    ok: bool
    violations: list[str] = field(default_factory=list)

    def __bool__(self):
        return self.ok

    def check(self):
        """Raise :class:`DomainError` naming the first violated condition."""
        if not self.ok:
            raise DomainError(self.violations[0])
        return self


def validate_domain(spec: ConvexDomainSpec, geom: GeometrySpec) -> DomainReport:
    violations = []
    if spec.radius < 0:
        violations.append(f"radius must be >= 0 (got {spec.radius})")
    if geom.kappa > 0:
        dk = geom.d_kappa
        eps = spec.epsilon
        if eps is None or not eps > 0:
            violations.append(f"epsilon must be > 0 when kappa > 0 (got {eps})")
        else:
            if not eps < dk / 2:
                violations.append(f"epsilon < D_kappa/2 violated: {eps!r} >= {dk / 2!r}")
            half = 0.5 * (dk / 2 - eps)
            if not spec.radius <= half * (1 + DOMAIN_RTOL):
                violations.append(
                    f"radius <= (D_kappa/2 - epsilon)/2 violated: {spec.radius!r} > {half!r}"
                )
        if not spec.radius < dk / 4:
            violations.append(f"radius < D_kappa/4 violated: {spec.radius!r} >= {dk / 4!r}")
    return DomainReport(ok=not violations, violations=violations)


def max_admissible_epsilon(kappa: float, radius: float) -> float | None:
    """Largest ``epsilon`` such that a ball of ``radius`` passes validation.

    Returns ``None`` when no positive ``epsilon`` exists.  For ``kappa <= 0``
    the domain parameter is irrelevant and ``math.inf`` is returned.
    """
    if kappa <= 0:
        return INF
    dk = model_diameter(kappa)
    eps = dk / 2 - 2 * radius
    if eps <= 0 or not radius < dk / 4:
        return None
    return eps


def geodesic_speed_defect(space, x, y, partition: Sequence[float] | None = None) -> float:
    """Largest deviation from constant speed along the geodesic ``x -> y``.

    For consecutive partition values ``s < t`` compares
    ``d(gamma(s), gamma(t))`` with ``|s - t| d(x, y)``.  Defaults to 8
    equispaced points.
    """
    if partition is None:
        partition = np.linspace(0.0, 1.0, 8)
    ts = sorted(float(t) for t in partition)
    dxy = space.distance(x, y)
    pts = [space.interpolate(x, y, t) for t in ts]
    worst = 0.0
    for (s, ps), (t, pt) in zip(zip(ts, pts), zip(ts[1:], pts[1:])):
        worst = max(worst, abs(space.distance(ps, pt) - abs(t - s) * dxy))
    return worst


def minimal_enclosing_ball(space, points, iters: int = 2000):
    """Approximate smallest ball containing ``points`` (farthest-point stepping).

    Moves the center a fraction ``1/(k+1)`` towards the current farthest
    point.  The returned radius is the exact covering radius of the returned
    center, so the ball always contains every point.
    """
    c = points[0]
    for k in range(1, iters + 1):
        d = space.distances(c, points)
        far = int(np.argmax(d))
        if d[far] == 0:
            break
        c = space.interpolate(c, points[far], 1.0 / (k + 1))
    return c, float(np.max(space.distances(c, points)))
