"""CSV readers and writers for point sets and tree edge lists.

Formats (one point per row, optional header line):

* Euclidean: ``d`` columns
* sphere / hyperbolic: ``d + 1`` ambient columns
* SPD: ``d * d`` columns, row-major
* tree: ``edge_id,offset``, with the tree in an edge-list file ``node_a,node_b,length``
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from ..errors import GeometryError
from .tree import MetricTree, TreeSpace


def _rows(path):
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if not rows:
        return rows
    try:
        [float(c) for c in rows[0]]
    except ValueError:
        rows = rows[1:]
    return rows


def read_edge_list(path) -> MetricTree:
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if rows and [c.strip() for c in rows[0]] == ["node_a", "node_b", "length"]:
        rows = rows[1:]
    edges = []
    for i, r in enumerate(rows):
        if len(r) != 3:
            raise GeometryError(f"edge list row {i + 1}: expected 3 columns, got {len(r)}")
        try:
            edges.append((r[0].strip(), r[1].strip(), float(r[2])))
        except ValueError as exc:
            raise GeometryError(f"edge list row {i + 1}: {exc}") from None
    return MetricTree(edges)


def read_points(path, space):
    """Read a point CSV and validate every row against ``space``."""
    rows = _rows(path)
    if not rows:
        raise GeometryError(f"{path}: no points")
    pts = []
    for i, r in enumerate(rows):
        try:
            if isinstance(space, TreeSpace):
                if len(r) != 2:
                    raise GeometryError(f"expected edge_id,offset, got {len(r)} columns")
                pts.append(space.validate_point((int(float(r[0])), float(r[1]))))
            else:
                pts.append(space.validate_point(np.array([float(c) for c in r])))
        except (GeometryError, ValueError) as exc:
            raise GeometryError(f"{path}: row {i + 1}: {exc}") from None
    if isinstance(space, TreeSpace):
        return pts
    return np.stack(pts)


def format_point(space, x) -> list[str]:
    if isinstance(space, TreeSpace):
        return [str(x.edge), repr(float(x.offset))]
    return [repr(float(c)) for c in np.asarray(x).ravel()]


def write_points(path, space, points):
    with open(Path(path), "w", newline="") as fh:
        w = csv.writer(fh)
        for p in points:
            w.writerow(format_point(space, p))
