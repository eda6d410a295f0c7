from ..errors import GeometryError
from .base import GeodesicSpace, RiemannianSpace
from .euclidean import Euclidean
from .hyperbolic import Hyperbolic, minkowski
from .io import read_edge_list, read_points, write_points
from .spd import SPD
from .sphere import Sphere
from .tree import MetricTree, TreeLocus, TreeSpace, build_figure1_tree

SPACE_NAMES = ("euclidean", "sphere", "hyperbolic", "spd", "tree")


def make_space(name, dim=None, kappa=None, tree=None):
    """Construct a space from its tag as used by the CLI and configs."""
    if name == "euclidean":
        return Euclidean(dim or 2)
    if name == "sphere":
        return Sphere(dim or 2, 1.0 if kappa is None else kappa)
    if name == "hyperbolic":
        return Hyperbolic(dim or 2, -1.0 if kappa is None else kappa)
    if name == "spd":
        return SPD(dim or 2)
    if name == "tree":
        if tree is None:
            raise GeometryError("tree space needs an edge list")
        return TreeSpace(tree)
    raise GeometryError(f"unknown space '{name}' (choose from {', '.join(SPACE_NAMES)})")


__all__ = [
    "GeodesicSpace",
    "RiemannianSpace",
    "Euclidean",
    "Sphere",
    "Hyperbolic",
    "SPD",
    "MetricTree",
    "TreeLocus",
    "TreeSpace",
    "build_figure1_tree",
    "make_space",
    "minkowski",
    "read_points",
    "write_points",
    "read_edge_list",
    "SPACE_NAMES",
]
