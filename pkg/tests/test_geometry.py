import math

import numpy as np
import pytest

from reachkit.errors import InvalidInputError
from reachkit.geometry import (
    FiniteMetricSpace,
    ModelParams,
    PointCloud,
    as_points,
    d_max_bound,
    diameter,
    distance_to_set,
    hausdorff_distance,
    jung_bound,
    nearest_points,
    pairwise_distances,
    spherical_chord_distance,
    spherical_distance,
)

from conftest import circle_space


def test_as_points_coerces_lists():
    pts = as_points([[0.0, 1.0], [2.0, 3.0]])
    assert pts.shape == (2, 2)
    assert pts.dtype == np.float64


def test_as_points_promotes_single_point():
    assert as_points([1.0, 2.0]).shape == (1, 2)


def test_as_points_rejects_bad_shapes():
    with pytest.raises(InvalidInputError):
        as_points([1.0])
    with pytest.raises(InvalidInputError):
        as_points(np.zeros((2, 2, 2)))
    with pytest.raises(InvalidInputError):
        as_points([[np.nan, 0.0]])


def test_point_cloud_basics():
    cloud = PointCloud(np.array([[0.0, 0.0], [3.0, 4.0]]))
    assert len(cloud) == 2
    assert cloud.dim == 2
    with pytest.raises(InvalidInputError):
        PointCloud(np.zeros((0, 2)))


def test_pairwise_345():
    pts = np.array([[0.0, 0.0], [3.0, 0.0], [0.0, 4.0]])
    dm = pairwise_distances(pts)
    expected = np.array([[0.0, 3.0, 4.0], [3.0, 0.0, 5.0], [4.0, 5.0, 0.0]])
    np.testing.assert_allclose(dm, expected, rtol=0, atol=1e-14)


def test_diameter():
    pts = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, 0.1]])
    assert diameter(pts) == pytest.approx(1.0)
    assert diameter(np.array([[2.0, 2.0]])) == 0.0


def test_hausdorff():
    a = np.array([[0.0, 0.0], [1.0, 0.0]])
    b = np.array([[0.0, 1.0]])
    # sup over a of dist to b is sqrt(2) (from (1,0)); reverse direction is 1
    assert hausdorff_distance(a, b) == pytest.approx(math.sqrt(2.0))
    assert hausdorff_distance(b, a) == pytest.approx(math.sqrt(2.0))
    assert hausdorff_distance(a, a) == 0.0


def test_distance_to_set_and_nearest():
    pts = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 5.0]])
    assert distance_to_set([0.0, 0.0], pts) == pytest.approx(1.0)
    idx = nearest_points([0.0, 0.0], pts)
    assert set(np.atleast_1d(idx).tolist()) == {0, 1}


def test_nearest_points_tol_widens_band():
    pts = np.array([[1.0, 0.0], [1.05, 0.0], [3.0, 0.0]])
    tight = nearest_points([0.0, 0.0], pts, tol=1e-9)
    wide = nearest_points([0.0, 0.0], pts, tol=0.1)
    assert set(np.atleast_1d(tight).tolist()) == {0}
    assert set(np.atleast_1d(wide).tolist()) == {0, 1}


def test_spherical_chord_distance():
    R = 1.0
    assert spherical_chord_distance(R, 2.0) == pytest.approx(math.pi)
    assert spherical_chord_distance(R, math.sqrt(2.0)) == pytest.approx(math.pi / 2)
    assert spherical_chord_distance(R, 0.0) == 0.0
    assert spherical_chord_distance(R, 2.0 + 1e-9) == math.inf
    with pytest.raises(InvalidInputError):
        spherical_chord_distance(0.0, 1.0)


def test_spherical_distance_matches_angle():
    p = np.array([1.0, 0.0, 0.0])
    q = np.array([0.0, 1.0, 0.0])
    assert spherical_distance(1.0, p, q) == pytest.approx(math.pi / 2)


def test_jung_bound():
    # sqrt(D / (2 (D+1))) * diam: D=1 halves the diameter, D=2 gives diam/sqrt(3)
    assert jung_bound(1.0, 1) == pytest.approx(0.5)
    assert jung_bound(3.0, 2) == pytest.approx(math.sqrt(3.0))
    with pytest.raises(InvalidInputError):
        jung_bound(-1.0, 1)


def test_d_max_bound():
    # d=1: 5 / (2 f_min); d=2: 25 / (pi f_min rch_min)
    p1 = ModelParams(d=1, k=2, rch_min=2.0, f_min=0.1, f_max=1.0)
    assert d_max_bound(p1) == pytest.approx(25.0)
    p2 = ModelParams(d=2, k=2, rch_min=2.0, f_min=0.5, f_max=1.0)
    assert d_max_bound(p2) == pytest.approx(25.0 / (math.pi * 0.5 * 2.0))


def test_model_params_validation():
    with pytest.raises(InvalidInputError):
        ModelParams(d=0, k=2, rch_min=1.0, f_min=0.1, f_max=1.0)
    with pytest.raises(InvalidInputError):
        ModelParams(d=1, k=1, rch_min=1.0, f_min=0.1, f_max=1.0)
    with pytest.raises(InvalidInputError):
        ModelParams(d=1, k=2, rch_min=0.0, f_min=0.1, f_max=1.0)
    with pytest.raises(InvalidInputError):
        ModelParams(d=1, k=2, rch_min=1.0, f_min=0.5, f_max=0.1)
    p = ModelParams(d=1, k=3, rch_min=1.0, f_min=0.1, f_max=1.0, L=[1.0, 2.0])
    assert p.L == (1.0, 2.0)
    with pytest.raises(InvalidInputError):
        ModelParams(d=1, k=2, rch_min=1.0, f_min=0.1, f_max=1.0, L=[-1.0])


def _space(table, intrinsic=False):
    n = table.shape[0]
    pts = np.column_stack([np.arange(n, dtype=float), np.zeros(n)])
    return FiniteMetricSpace(PointCloud(pts), table, intrinsic=intrinsic)


def test_metric_space_symmetrizes_small_noise():
    t = np.array([[0.0, 1.0], [1.0 + 5e-10, 0.0]])
    sp = _space(t)
    assert sp.table[0, 1] == sp.table[1, 0] == pytest.approx(1.0 + 2.5e-10)


def test_metric_space_rejects_large_asymmetry():
    t = np.array([[0.0, 1.0], [1.1, 0.0]])
    with pytest.raises(InvalidInputError):
        _space(t)


def test_metric_space_rejects_bad_diagonal_and_nan():
    with pytest.raises(InvalidInputError):
        _space(np.array([[0.1, 1.0], [1.0, 0.0]]))
    with pytest.raises(InvalidInputError):
        _space(np.array([[0.0, np.nan], [np.nan, 0.0]]))
    with pytest.raises(InvalidInputError):
        _space(np.array([[0.0, -1.0], [-1.0, 0.0]]))


def test_metric_space_inf_pattern_must_be_symmetric():
    t = np.array([[0.0, np.inf], [1.0, 0.0]])
    with pytest.raises(InvalidInputError):
        _space(t)


def test_intrinsic_clamps_tiny_deficit():
    # entries a hair below the chord are lifted to the chord, not rejected
    pts = PointCloud(np.array([[0.0, 0.0], [1.0, 0.0]]))
    t = np.array([[0.0, 1.0 - 1e-12], [1.0 - 1e-12, 0.0]])
    sp = FiniteMetricSpace(pts, t, intrinsic=True)
    assert sp.table[0, 1] == 1.0


def test_intrinsic_rejects_real_deficit():
    pts = PointCloud(np.array([[0.0, 0.0], [1.0, 0.0]]))
    t = np.array([[0.0, 0.5], [0.5, 0.0]])
    with pytest.raises(InvalidInputError):
        FiniteMetricSpace(pts, t, intrinsic=True)


def test_table_is_read_only():
    sp = circle_space(16, 0)
    with pytest.raises(ValueError):
        sp.table[0, 1] = 3.0
