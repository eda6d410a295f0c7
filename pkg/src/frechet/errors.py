"""Exception hierarchy shared by all modules."""


class FrechetError(Exception):
    """Base class for library errors."""


class GeometryError(FrechetError, ValueError):
    """Invalid point, dimension mismatch or undefined geometric operation."""


class GeodesicNotUnique(GeometryError):
    """Raised for pairs without a unique geodesic (antipodal sphere points)."""


class NotSmoothError(GeometryError):
    """Raised when log/exp/gradient is requested on a non-smooth space."""


class DomainError(FrechetError, ValueError):
    """A convex-domain hypothesis is violated."""


class MissingFieldError(FrechetError, ValueError):
    """A bound evaluator was called without one of its required inputs."""

    def __init__(self, field, bound=None):
        self.field = field
        where = f" for {bound}" if bound else ""
        super().__init__(f"missing required field '{field}'{where}")


class BudgetOverflow(FrechetError, ValueError):
    """The PAC sample budget exceeds the hard cap."""

    def __init__(self, m, cap):
        self.m = m
        self.cap = cap
        super().__init__(f"sample budget m={m} exceeds the cap of {cap}")


class ConfigError(FrechetError, ValueError):
    """Experiment configuration failed validation."""
