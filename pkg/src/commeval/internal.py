"""Ground-truth-free quality indices.

Graph-based: modularity (intra-edge fraction against a degree-preserving
null) and partition density (normalized internal link density, summed over
communities).  Vector-data: within-cluster sum of squares, Calinski-Harabasz
ratio and mean silhouette, all under Euclidean distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import ValidationError
from .partition import Partition


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected simple graph over nodes 0..n-1.

    `edges` is an (m, 2) array with u < v per row, no duplicates and no
    self-loops; construct through :func:`graph_from_edges`.
    """

    n: int
    edges: np.ndarray

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        object.__setattr__(self, "edges", edges)
        if self.n < 1:
            raise ValidationError("graph needs at least one node")
        if edges.size:
            if edges.min() < 0 or edges.max() >= self.n:
                raise ValidationError("edge endpoint out of range")
            if (edges[:, 0] >= edges[:, 1]).any():
                raise ValidationError("edges must satisfy u < v")
            if len(np.unique(edges[:, 0] * self.n + edges[:, 1])) != len(edges):
                raise ValidationError("duplicate edges")

    @property
    def m(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        return np.bincount(self.edges.ravel(), minlength=self.n)


def graph_from_edges(n: int, pairs: Iterable[tuple[int, int]]) -> Graph:
    """Build a simple graph, deduplicating reversed duplicates.

    Self-loops are rejected.
    """
    seen = set()
    for u, v in pairs:
        if u == v:
            raise ValidationError(f"self-loop on node {u}")
        seen.add((v, u) if u > v else (u, v))
    edges = np.array(sorted(seen), dtype=np.int64).reshape(-1, 2)
    return Graph(n, edges)


@dataclass(frozen=True, eq=False)
class PointSet:
    """n real-valued points of a shared dimension d >= 1."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts[:, None]
        object.__setattr__(self, "points", pts)
        if pts.ndim != 2 or pts.shape[0] == 0 or pts.shape[1] == 0:
            raise ValidationError("point set must be a non-empty n x d array")

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def centroid(self) -> np.ndarray:
        return self.points.mean(axis=0)


def modularity(g: Graph, p: Partition) -> float:
    """Newman modularity Q in [-1, 1].

    Q = (1/2m) sum_ij (A_ij - k_i k_j / 2m) delta(g_i, g_j); evaluated as
    intra/m - sum_l K_l^2 / 4m^2 with K_l the degree mass of community l.
    """
    _check_cover(g, p)
    if g.m == 0:
        raise ValidationError("modularity undefined on an edgeless graph")
    labels = p.labels
    intra = int((labels[g.edges[:, 0]] == labels[g.edges[:, 1]]).sum())
    degree_mass = np.bincount(labels, weights=g.degrees(), minlength=p.c + 1)[1:]
    return intra / g.m - float((degree_mass**2).sum()) / (4.0 * g.m * g.m)


def partition_density(g: Graph, p: Partition) -> float:
    """Mean normalized internal link density, weighted by community edges.

    D = (2/m) sum_a m_a (m_a - (n_a - 1)) / ((n_a - 2)(n_a - 1)).
    Communities with at most two nodes carry no density signal and
    contribute zero.
    """
    _check_cover(g, p)
    if g.m == 0:
        raise ValidationError("partition density undefined on an edgeless graph")
    labels = p.labels
    u, v = g.edges[:, 0], g.edges[:, 1]
    same = labels[u] == labels[v]
    m_per = np.bincount(labels[u][same], minlength=p.c + 1)[1:].astype(np.float64)
    n_per = p.sizes().astype(np.float64)
    ok = n_per > 2
    terms = np.zeros_like(m_per)
    terms[ok] = (
        m_per[ok]
        * (m_per[ok] - (n_per[ok] - 1.0))
        / ((n_per[ok] - 2.0) * (n_per[ok] - 1.0))
    )
    return 2.0 * float(terms.sum()) / g.m


def _check_cover(g: Graph, p: Partition):
    if p.n != g.n:
        raise ValidationError(f"partition covers {p.n} nodes, graph has {g.n}")


def within_ss(ps: PointSet, p: Partition) -> float:
    """Total within-cluster sum of squared Euclidean distances to centroids."""
    _check_points(ps, p)
    total = 0.0
    for members in _cluster_indices(p):
        pts = ps.points[members]
        total += float(((pts - pts.mean(axis=0)) ** 2).sum())
    return total


def calinski_harabasz(ps: PointSet, p: Partition) -> float:
    """Between/within variance ratio [BGSS/(c-1)] / [WGSS/(n-c)].

    Requires 2 <= c < n.  Perfectly compact clusters (WGSS = 0) return +inf.
    """
    _check_points(ps, p)
    n, c = ps.n, p.c
    if c < 2 or c >= n:
        raise ValidationError("calinski-harabasz requires 2 <= c < n")
    grand = ps.centroid()
    bgss = 0.0
    for members in _cluster_indices(p):
        centroid = ps.points[members].mean(axis=0)
        bgss += len(members) * float(((centroid - grand) ** 2).sum())
    wgss = within_ss(ps, p)
    if wgss == 0.0:
        return math.inf
    return (bgss / (c - 1)) / (wgss / (n - c))


def silhouette(ps: PointSet, p: Partition) -> float:
    """Mean silhouette (b - a)/max(a, b) over all samples, in [-1, 1].

    a = mean distance to own cluster (excluding self), b = smallest mean
    distance to another cluster.  Samples in singleton clusters score 0, as
    do samples where both means vanish.
    """
    _check_points(ps, p)
    if p.c < 2:
        raise ValidationError("silhouette requires at least two clusters")
    pts = ps.points
    dists = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2))
    labels = p.labels
    sizes = p.sizes()
    scores = np.zeros(ps.n)
    # Mean distance from each sample to each cluster, own cluster excluding self.
    cluster_sums = np.zeros((ps.n, p.c))
    for cid in range(1, p.c + 1):
        cluster_sums[:, cid - 1] = dists[:, labels == cid].sum(axis=1)
    for i in range(ps.n):
        own = labels[i] - 1
        if sizes[own] == 1:
            continue
        a = cluster_sums[i, own] / (sizes[own] - 1)
        other = [cluster_sums[i, k] / sizes[k] for k in range(p.c) if k != own]
        b = min(other)
        peak = max(a, b)
        if peak > 0:
            scores[i] = (b - a) / peak
    return float(scores.mean())


def _check_points(ps: PointSet, p: Partition):
    if p.n != ps.n:
        raise ValidationError(f"partition covers {p.n} nodes, point set has {ps.n}")


def _cluster_indices(p: Partition) -> list[np.ndarray]:
    return [np.flatnonzero(p.labels == cid) for cid in range(1, p.c + 1)]
