"""Iterated (inductive) and empirical barycenters, Frechet objective and gradient."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .errors import FrechetError, NotSmoothError

DEFAULT_TOL = 1e-9
DEFAULT_MAX_ROUNDS = 10_000
GRADIENT_STEP = 0.5


class ScheduleError(FrechetError, ValueError):
    pass


@dataclass(frozen=True)
class StepSchedule:
    """Step sizes ``t_k`` (``k >= 2``) of the iterated barycenter.

    ``harmonic`` gives ``1/k``; ``positive-curvature`` gives
    ``2 / (alpha k + 2)``; ``explicit`` stores ``t_2, ..., t_n``.
    """

    kind: str = "harmonic"
    alpha: float | None = None
    values: tuple = ()

    def __post_init__(self):
        if self.kind not in ("harmonic", "positive-curvature", "explicit"):
            raise ScheduleError(f"unknown schedule kind '{self.kind}'")
        if self.kind == "positive-curvature" and not (self.alpha is not None and self.alpha > 0):
            raise ScheduleError("positive-curvature schedule needs alpha > 0")
        if self.kind == "explicit":
            vals = tuple(float(t) for t in self.values)
            if any(not 0 < t < 1 for t in vals):
                raise ScheduleError("explicit step sizes must lie in (0, 1)")
            object.__setattr__(self, "values", vals)

    @classmethod
    def harmonic(cls):
        return cls("harmonic")

    @classmethod
    def positive_curvature(cls, alpha):
        return cls("positive-curvature", alpha=float(alpha))

    @classmethod
    def explicit(cls, values):
        return cls("explicit", values=tuple(values))

    def __call__(self, k: int) -> float:
        return step_size(self, k)


def step_size(schedule: StepSchedule, k: int) -> float:
    if k < 2:
        raise ScheduleError(f"step index must be >= 2 (got {k})")
    if schedule.kind == "harmonic":
        return 1.0 / k
    if schedule.kind == "positive-curvature":
        return 2.0 / (schedule.alpha * k + 2.0)
    if k - 2 >= len(schedule.values):
        raise ScheduleError(f"explicit schedule has no step for k = {k}")
    return schedule.values[k - 2]


def resolvent_lambda(t: float) -> float:
    """``lambda_k`` for which the step ``t_k`` is a resolvent step."""
    return t / (2.0 * (1.0 - t))


@dataclass
class SolverReport:
    result: Any
    iterations: int
    movement: float
    method: str
    converged: bool = True
    flags: list = field(default_factory=list)


def _npoints(points):
    return len(points)


def iterated_barycenter(space, points: Sequence, schedule: StepSchedule | None = None) -> SolverReport:
    """``b_1 = x_1``, ``b_k = gamma_{b_{k-1}, x_k}(t_k)``."""
    schedule = schedule or StepSchedule.harmonic()
    n = _npoints(points)
    if n == 0:
        raise FrechetError("empty point list")
    b = points[0]
    move = 0.0
    for k in range(2, n + 1):
        nb = space.interpolate(b, points[k - 1], step_size(schedule, k))
        if k == n:
            move = space.distance(b, nb)
        b = nb
    return SolverReport(b, n - 1, move, "iterated")


def frechet_value(space, points, x) -> float:
    d = space.distances(x, points)
    return float(np.mean(d**2))


def frechet_gradient(space, points, x):
    if not space.smooth:
        raise NotSmoothError(f"gradient is undefined on '{space.name}'")
    return -2.0 * np.mean(space.log_many(x, points), axis=0)


def _diameter_hint(space, points):
    # cheap upper bound on the instance diameter: 2 * max distance to the first point
    return 2.0 * float(np.max(space.distances(points[0], points)))


def _exact(space, points):
    if space.name == "euclidean":
        return np.mean(np.asarray(points), axis=0)
    if space.name == "tree":
        return space.exact_barycenter(points)
    raise FrechetError(f"no closed-form barycenter on '{space.name}'")


def _cyclic(space, points, tol, max_rounds):
    n = _npoints(points)
    scale = 1.0 + _diameter_hint(space, points)
    b = points[0]
    k = 1
    move = np.inf
    for q in range(1, max_rounds + 1):
        start = b
        for i in range(n):
            if k == 1:
                b = points[0]
            else:
                b = space.interpolate(b, points[i], 1.0 / k)
            k += 1
        if q > 1:
            move = space.distance(start, b)
            if move < tol * scale:
                return SolverReport(b, q, move, "cyclic")
    return SolverReport(b, max_rounds, move, "cyclic", converged=False, flags=["non-convergence"])


def _gradient(space, points, tol, max_rounds, eta):
    x = space.initial_guess(points)
    gnorm = np.inf
    for it in range(max_rounds + 1):
        g = frechet_gradient(space, points, x)
        gnorm = space.norm(x, g)
        if gnorm < tol:
            return SolverReport(x, it, eta * gnorm, "gradient")
        if it == max_rounds:
            break
        x = space.exp(x, -eta * g)
    return SolverReport(x, max_rounds, eta * gnorm, "gradient", converged=False, flags=["non-convergence"])


def empirical_barycenter(
    space,
    points,
    method: str = "auto",
    tol: float = DEFAULT_TOL,
    max_rounds: int = DEFAULT_MAX_ROUNDS,
    eta: float = GRADIENT_STEP,
) -> SolverReport:
    """Minimiser of ``x -> mean_i d(x, x_i)^2``.

    Parameters
    ----------
    method : {'auto', 'exact', 'cyclic', 'gradient'}
        ``exact`` is available on Euclidean spaces and trees, ``gradient`` on
        smooth spaces.  ``auto`` picks exact, then gradient, then cyclic.
    tol : float
        Gradient-norm threshold, or per-pass movement threshold relative to
        ``1 + diameter`` for the cyclic method.
    max_rounds : int
        Cap on gradient steps or cyclic passes.  Hitting it flags the report
        as non-converged; the last iterate is still returned.
    """
    n = _npoints(points)
    if n == 0:
        raise FrechetError("empty point list")
    if method == "auto":
        if space.name in ("euclidean", "tree"):
            method = "exact"
        elif space.smooth:
            method = "gradient"
        else:
            method = "cyclic"
    if method == "exact":
        return SolverReport(_exact(space, points), 0, 0.0, "exact")
    if n == 1:
        return SolverReport(points[0], 0, 0.0, method)
    if method == "cyclic":
        return _cyclic(space, points, tol, max_rounds)
    if method == "gradient":
        if not space.smooth:
            raise NotSmoothError(f"gradient method needs a smooth space, got '{space.name}'")
        return _gradient(space, points, tol, max_rounds, eta)
    raise FrechetError(f"unknown method '{method}'")
