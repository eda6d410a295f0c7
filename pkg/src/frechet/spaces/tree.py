"""Metric trees: finite acyclic graphs with positive edge lengths.

A point of the tree is a :class:`TreeLocus` ``(edge, offset)``.  Each edge is
stored with its lower-indexed endpoint at offset 0, nodes being indexed in
order of first appearance in the edge list.  A locus sitting on a node is
canonicalised to the incident edge with the smallest id, so two loci for the
same point compare equal.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from ..errors import GeometryError
from .base import GeodesicSpace

OFFSET_TOL = 1e-12


@dataclass(frozen=True)
class TreeLocus:
    edge: int
    offset: float


class MetricTree:
    """Connected acyclic weighted graph.

    Parameters
    ----------
    edges : iterable of (node_a, node_b, length)
        Node labels may be any hashable values.
    """

    def __init__(self, edges):
        edges = list(edges)
        if not edges:
            raise GeometryError("a metric tree needs at least one edge")
        self.nodes = []
        index = {}
        for a, b, _ in edges:
            for n in (a, b):
                if n not in index:
                    index[n] = len(self.nodes)
                    self.nodes.append(n)
        self.index = index
        nn = len(self.nodes)
        if len(edges) != nn - 1:
            raise GeometryError(f"{len(edges)} edges on {nn} nodes cannot form a tree")
        self.u = np.empty(len(edges), dtype=int)
        self.v = np.empty(len(edges), dtype=int)
        self.length = np.empty(len(edges))
        self.adj = [[] for _ in range(nn)]
        self.edge_of = {}
        for k, (a, b, ell) in enumerate(edges):
            ell = float(ell)
            if not ell > 0 or not np.isfinite(ell):
                raise GeometryError(f"edge {k} has non-positive length {ell}")
            i, j = index[a], index[b]
            if i == j:
                raise GeometryError(f"edge {k} is a self-loop")
            if (min(i, j), max(i, j)) in self.edge_of:
                raise GeometryError(f"edge {k} duplicates an earlier edge")
            self.u[k], self.v[k] = min(i, j), max(i, j)
            self.length[k] = ell
            self.adj[i].append((j, k))
            self.adj[j].append((i, k))
            self.edge_of[(min(i, j), max(i, j))] = k
        self._root_at(0)
        if np.any(self.depth < 0):
            raise GeometryError("edge list is not connected")
        self.node_dist = self._all_pairs()
        self.first_edge = [min(k for _, k in nbrs) for nbrs in self.adj]

    @property
    def n_edges(self):
        return len(self.length)

    def _root_at(self, r):
        nn = len(self.nodes)
        self.parent = np.full(nn, -1)
        self.depth = np.full(nn, -1)
        self.height = np.zeros(nn)
        self.depth[r] = 0
        queue = deque([r])
        while queue:
            i = queue.popleft()
            for j, k in self.adj[i]:
                if self.depth[j] < 0:
                    self.depth[j] = self.depth[i] + 1
                    self.height[j] = self.height[i] + self.length[k]
                    self.parent[j] = i
                    queue.append(j)

    def _all_pairs(self):
        nn = len(self.nodes)
        out = np.zeros((nn, nn))
        for s in range(nn):
            seen = np.zeros(nn, dtype=bool)
            seen[s] = True
            queue = deque([s])
            while queue:
                i = queue.popleft()
                for j, k in self.adj[i]:
                    if not seen[j]:
                        seen[j] = True
                        out[s, j] = out[s, i] + self.length[k]
                        queue.append(j)
        return out

    def node_path(self, a: int, b: int) -> list[int]:
        """Node indices on the unique path from ``a`` to ``b``."""
        up, down = [a], [b]
        while up[-1] != down[-1]:
            if self.depth[up[-1]] >= self.depth[down[-1]]:
                up.append(int(self.parent[up[-1]]))
            else:
                down.append(int(self.parent[down[-1]]))
        return up + down[-2::-1]

    def locus(self, edge: int, offset: float) -> TreeLocus:
        """Validated, canonical locus on ``edge`` at ``offset`` from its lower node."""
        edge = int(edge)
        if not 0 <= edge < self.n_edges:
            raise GeometryError(f"unknown edge id {edge}")
        ell = self.length[edge]
        offset = float(offset)
        tol = OFFSET_TOL * ell
        if not (-tol <= offset <= ell + tol):
            raise GeometryError(f"offset {offset} outside edge {edge} of length {ell}")
        if offset <= tol:
            return self.node_locus(int(self.u[edge]))
        if offset >= ell - tol:
            return self.node_locus(int(self.v[edge]))
        return TreeLocus(edge, offset)

    def node_locus(self, node: int) -> TreeLocus:
        k = self.first_edge[node]
        return TreeLocus(k, 0.0 if self.u[k] == node else float(self.length[k]))

    def node(self, label) -> TreeLocus:
        return self.node_locus(self.index[label])


class TreeSpace(GeodesicSpace):
    """A metric tree viewed as a CAT(0) geodesic space."""

    name = "tree"
    kappa = 0.0

    def __init__(self, tree: MetricTree):
        self.tree = tree

    def __repr__(self):
        return f"TreeSpace(nodes={len(self.tree.nodes)}, edges={self.tree.n_edges})"

    def validate_point(self, x):
        if isinstance(x, TreeLocus):
            return self.tree.locus(x.edge, x.offset)
        edge, offset = x
        return self.tree.locus(int(edge), float(offset))

    def as_points(self, seq):
        pts = [self.validate_point(p) for p in seq]
        if not pts:
            raise GeometryError("empty point set")
        return pts

    def take(self, points, idx):
        return [points[i] for i in np.asarray(idx, dtype=int)]

    def _ends(self, x):
        t = self.tree
        e = x.edge
        return (int(t.u[e]), x.offset), (int(t.v[e]), t.length[e] - x.offset)

    def _arrays(self, points):
        e = np.fromiter((p.edge for p in points), dtype=int, count=len(points))
        o = np.fromiter((p.offset for p in points), dtype=float, count=len(points))
        return e, o

    def distance(self, x, y):
        if x.edge == y.edge:
            return abs(x.offset - y.offset)
        D = self.tree.node_dist
        return min(cx + D[a, b] + cy for a, cx in self._ends(x) for b, cy in self._ends(y))

    def distances(self, x, points):
        t = self.tree
        e, o = self._arrays(points)
        U, V = t.u[e], t.v[e]
        best = np.full(len(points), np.inf)
        for a, cx in self._ends(x):
            best = np.minimum(best, cx + t.node_dist[a, U] + o)
            best = np.minimum(best, cx + t.node_dist[a, V] + t.length[e] - o)
        same = e == x.edge
        best[same] = np.abs(o[same] - x.offset)
        return best

    def interpolate(self, x, y, t):
        if t == 0:
            return x
        if t == 1:
            return y
        tr = self.tree
        if x.edge == y.edge:
            return tr.locus(x.edge, x.offset + t * (y.offset - x.offset))
        D = tr.node_dist
        _, (a, cx), (b, cy) = min(
            (cx + D[a, b] + cy, (a, cx), (b, cy))
            for a, cx in self._ends(x)
            for b, cy in self._ends(y)
        )
        s = t * (cx + D[a, b] + cy)
        if s <= cx:
            step = -s if a == tr.u[x.edge] else s
            return tr.locus(x.edge, x.offset + step)
        s -= cx
        path = tr.node_path(a, b)
        for i, j in zip(path, path[1:]):
            k = tr.edge_of[(min(i, j), max(i, j))]
            ell = tr.length[k]
            if s <= ell:
                return tr.locus(k, s if i == tr.u[k] else ell - s)
            s -= ell
        s = min(s, cy)
        return tr.locus(y.edge, s if b == tr.u[y.edge] else tr.length[y.edge] - s)

    def points_close(self, x, y, atol=1e-10):
        return self.distance(x, y) <= atol

    def exact_barycenter(self, points, weights=None):
        """Exact minimiser of the (weighted) Frechet function.

        Restricted to an edge ``[u, v]`` parametrised by arc length ``s``,
        ``d(gamma(s), x_i) = |s - m_i|`` for an affine anchor ``m_i``, so the
        restricted problem is a clipped weighted mean.  The best edge wins.
        """
        tr = self.tree
        e, o = self._arrays(points)
        w = np.full(len(points), 1.0 / len(points)) if weights is None else np.asarray(weights, float)
        w = w / w.sum()
        best = (np.inf, None)
        for k in range(tr.n_edges):
            u, v, ell = tr.u[k], tr.v[k], tr.length[k]
            du = np.minimum(tr.node_dist[u, tr.u[e]] + o, tr.node_dist[u, tr.v[e]] + tr.length[e] - o)
            dv = np.minimum(tr.node_dist[v, tr.u[e]] + o, tr.node_dist[v, tr.v[e]] + tr.length[e] - o)
            m = np.where(du <= dv, -du, ell + dv)
            m[e == k] = o[e == k]
            s = min(max(float(w @ m), 0.0), ell)
            val = float(w @ (s - m) ** 2)
            if val < best[0] - 1e-15:
                best = (val, (k, s))
        k, s = best[1]
        return tr.locus(k, s)


def build_figure1_tree(p: int, arms=(1.0, 1.0, 1.0)):
    """Star tree with three arms and ``p`` sample points on each leaf.

    The points are listed leaf by leaf (all copies of the first leaf, then the
    second, then the third), the ordering that keeps the iterated barycenter
    away from the root.

    Returns
    -------
    tree : MetricTree
    points : list of TreeLocus, length ``3 p``
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    if len(arms) != 3 or min(arms) <= 0:
        raise ValueError("need three positive arm lengths")
    tree = MetricTree([("root", leaf, ell) for leaf, ell in zip("ABC", arms)])
    points = []
    for leaf in "ABC":
        points.extend([tree.node(leaf)] * p)
    return tree, points
