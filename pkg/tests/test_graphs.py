import math

import numpy as np
import pytest

from reachkit.errors import InvalidInputError
from reachkit.geometry import PointCloud, pairwise_distances
from reachkit.graphs import (
    all_pairs_geodesics,
    build_graph,
    geodesics_from,
    graph_geodesic,
)
from reachkit.rng import rng_stream


def _line_cloud(xs):
    return PointCloud(np.column_stack([np.asarray(xs, dtype=float), np.zeros(len(xs))]))


def test_build_graph_validates_radius():
    cloud = _line_cloud([0.0, 1.0])
    with pytest.raises(InvalidInputError):
        build_graph(cloud, 0.0)
    with pytest.raises(InvalidInputError):
        build_graph(cloud, math.inf)


def test_path_graph_hand_checked():
    g = build_graph(_line_cloud([0.0, 1.0, 2.1]), 1.2)
    # edges (0,1) and (1,2) only; 0-2 gap is 2.1 > 1.2
    assert graph_geodesic(g, 0, 1) == pytest.approx(1.0)
    assert graph_geodesic(g, 1, 2) == pytest.approx(1.1)
    assert graph_geodesic(g, 0, 2) == pytest.approx(2.1)
    assert graph_geodesic(g, 0, 0) == 0.0


def test_unreachable_is_inf():
    g = build_graph(_line_cloud([0.0, 1.0, 5.0]), 1.5)
    assert graph_geodesic(g, 0, 2) == math.inf
    table = all_pairs_geodesics(g)
    assert table[0, 2] == math.inf
    assert table[0, 1] == pytest.approx(1.0)


def test_vertex_bounds_checked():
    g = build_graph(_line_cloud([0.0, 1.0]), 2.0)
    with pytest.raises(InvalidInputError):
        graph_geodesic(g, 0, 2)
    with pytest.raises(InvalidInputError):
        graph_geodesic(g, -1, 0)


def test_coincident_points_stay_connected():
    # duplicate points give a zero-length edge; the traversal must not
    # drop it, so the pair reads as essentially coincident, not unreachable
    pts = np.array([[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]])
    g = build_graph(PointCloud(pts), 1.5)
    assert graph_geodesic(g, 0, 1) < 1e-250
    assert graph_geodesic(g, 0, 2) == pytest.approx(1.0)


def test_three_routes_agree_on_random_clouds():
    for seed in range(4):
        rng = rng_stream(seed, 5)
        pts = rng.uniform(-1.0, 1.0, size=(24, 2))
        g = build_graph(PointCloud(pts), 0.6)
        table = all_pairs_geodesics(g)
        np.testing.assert_array_equal(table, table.T)
        assert np.all(np.diag(table) == 0.0)
        # the all-pairs table is symmetrized across source runs, so a
        # single-source row may sit one rounding ulp above it
        rows = geodesics_from(g, [3, 17])
        np.testing.assert_allclose(rows[0], table[3], rtol=1e-12)
        np.testing.assert_allclose(rows[1], table[17], rtol=1e-12)
        np.testing.assert_array_equal(rows, geodesics_from(g, [3, 17]))
        for s, t in ((0, 23), (5, 11), (20, 2)):
            if math.isinf(table[s, t]):
                assert graph_geodesic(g, s, t) == math.inf
            else:
                assert graph_geodesic(g, s, t) == pytest.approx(table[s, t], rel=1e-12)


def _floyd_warshall(weights):
    d = weights.copy()
    n = d.shape[0]
    for k in range(n):
        d = np.minimum(d, d[:, k, None] + d[None, k, :])
    return d


def test_matches_cubic_oracle_on_dyadic_lattice():
    # 6x6 lattice with spacings 0.25 / 0.375 and radius 0.4 keeps only
    # axis-aligned edges, so every edge weight and geodesic is dyadic and
    # both algorithms must agree bit for bit
    xs, ys = np.meshgrid(0.25 * np.arange(6), 0.375 * np.arange(6))
    base = np.column_stack([xs.ravel(), ys.ravel()])
    for seed in range(6):
        rng = rng_stream(seed, 31)
        keep = np.sort(rng.permutation(36)[:30])
        pts = base[keep]
        g = build_graph(PointCloud(pts), 0.4)
        table = all_pairs_geodesics(g)

        chords = pairwise_distances(pts)
        w = np.where((chords <= 0.4) & (chords > 0.0), chords, np.inf)
        np.fill_diagonal(w, 0.0)
        oracle = _floyd_warshall(w)
        np.testing.assert_array_equal(table, oracle)


def test_graph_metadata():
    cloud = _line_cloud([0.0, 1.0, 2.1])
    g = build_graph(cloud, 1.2)
    assert g.radius == 1.2
    assert g.cloud is cloud
    assert g.adjacency.shape == (3, 3)
    # both orientations stored
    assert g.adjacency[0, 1] == g.adjacency[1, 0] == pytest.approx(1.0)
