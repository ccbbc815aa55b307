"""Neighborhood graphs and shortest-path distances on point clouds.

Edges connect points at Euclidean distance at most the graph radius; edge
weights are the Euclidean lengths. All-pairs and multi-source queries go
through scipy's compiled Dijkstra; `graph_geodesic` is an independent
binary-heap implementation used as a cross-check and for single pairs.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph
from scipy.spatial import cKDTree

from .errors import InvalidInputError
from .geometry import PointCloud

__all__ = [
    "NeighborhoodGraph",
    "build_graph",
    "graph_geodesic",
    "geodesics_from",
    "all_pairs_geodesics",
]

# scipy.sparse treats stored zeros as absent entries, so coincident points
# get this floor as their edge weight instead of dropping the edge.
_ZERO_EDGE = 1e-300


@dataclass(frozen=True)
class NeighborhoodGraph:
    """Undirected weighted graph on a cloud with a fixed connection radius."""

    cloud: PointCloud
    radius: float
    adjacency: sparse.csr_matrix

    @property
    def n_vertices(self) -> int:
        return len(self.cloud)

    @property
    def n_edges(self) -> int:
        return self.adjacency.nnz // 2

    def degree(self) -> np.ndarray:
        return np.diff(self.adjacency.indptr)


def build_graph(cloud: PointCloud, radius: float) -> NeighborhoodGraph:
    """Connect all pairs at Euclidean distance <= radius."""
    if not (radius > 0 and math.isfinite(radius)):
        raise InvalidInputError(f"graph radius must be positive and finite, got {radius}")
    pts = cloud.points
    n = len(cloud)
    pairs = cKDTree(pts).query_pairs(radius, output_type="ndarray")
    if pairs.size:
        w = np.linalg.norm(pts[pairs[:, 0]] - pts[pairs[:, 1]], axis=1)
        w = np.maximum(w, _ZERO_EDGE)
        rows = np.concatenate([pairs[:, 0], pairs[:, 1]])
        cols = np.concatenate([pairs[:, 1], pairs[:, 0]])
        data = np.concatenate([w, w])
    else:
        rows = cols = np.empty(0, dtype=int)
        data = np.empty(0)
    adj = sparse.csr_matrix((data, (rows, cols)), shape=(n, n))
    return NeighborhoodGraph(cloud, float(radius), adj)


def _check_vertex(graph: NeighborhoodGraph, idx: int, name: str) -> int:
    idx = int(idx)
    if not (0 <= idx < graph.n_vertices):
        raise InvalidInputError(f"{name} index {idx} out of range [0, {graph.n_vertices})")
    return idx


def graph_geodesic(graph: NeighborhoodGraph, source: int, target: int) -> float:
    """Shortest-path length between two vertices (binary-heap Dijkstra).

    Returns +inf when the target is unreachable.
    """
    source = _check_vertex(graph, source, "source")
    target = _check_vertex(graph, target, "target")
    if source == target:
        return 0.0
    indptr = graph.adjacency.indptr
    indices = graph.adjacency.indices
    data = graph.adjacency.data
    dist = np.full(graph.n_vertices, np.inf)
    dist[source] = 0.0
    done = np.zeros(graph.n_vertices, dtype=bool)
    heap = [(0.0, source)]
    while heap:
        d_u, u = heapq.heappop(heap)
        if done[u]:
            continue
        if u == target:
            return d_u
        done[u] = True
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            if done[v]:
                continue
            cand = d_u + data[k]
            if cand < dist[v]:
                dist[v] = cand
                heapq.heappush(heap, (cand, v))
    return math.inf


def geodesics_from(graph: NeighborhoodGraph, sources) -> np.ndarray:
    """Shortest-path lengths from each source vertex to every vertex."""
    sources = np.atleast_1d(np.asarray(sources, dtype=int))
    for s in sources:
        _check_vertex(graph, int(s), "source")
    # The adjacency stores both orientations of every edge, so the
    # directed traversal sees the same graph and skips the per-vertex
    # incoming-edge scan directed=False would add.
    return csgraph.dijkstra(graph.adjacency, directed=True, indices=sources)


def all_pairs_geodesics(graph: NeighborhoodGraph) -> np.ndarray:
    """Dense all-pairs shortest-path table; +inf across components."""
    table = csgraph.dijkstra(graph.adjacency, directed=True)
    # Row-wise runs can disagree by addition-order rounding; keep the smaller.
    return np.minimum(table, table.T)
