"""Barycenter estimation in geodesic spaces of bounded curvature."""

__version__ = "0.1.0"
