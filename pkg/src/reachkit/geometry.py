"""Euclidean primitives shared by every estimator.

Point clouds, finite metric tables, comparison distances on spheres, and
the closed-form calibration bounds (geodesic diameter cap, Jung radius)
used to cap the estimators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

from .errors import InvalidInputError

__all__ = [
    "PointCloud",
    "ModelParams",
    "FiniteMetricSpace",
    "as_points",
    "spherical_distance",
    "spherical_chord_distance",
    "hausdorff_distance",
    "distance_to_set",
    "nearest_points",
    "pairwise_distances",
    "diameter",
    "d_max_bound",
    "jung_bound",
]

# Relative width of the tie band used when collecting nearest points.
NEAREST_TIE_REL_TOL = 1e-9

# Relative slack allowed before an intrinsic table is declared inconsistent
# with its chords. Deficits inside the slack are clamped up to the chord.
INTRINSIC_REL_SLACK = 1e-9


def as_points(obj, *, name: str = "points", min_dim: int = 2) -> np.ndarray:
    """Coerce input to a finite float64 array of shape (n, D), D >= min_dim."""
    pts = np.asarray(obj, dtype=float)
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.ndim != 2:
        raise InvalidInputError(f"{name} must be a 2d array, got shape {pts.shape}")
    if pts.shape[1] < min_dim:
        raise InvalidInputError(
            f"{name} must have ambient dimension >= {min_dim}, got {pts.shape[1]}"
        )
    if not np.all(np.isfinite(pts)):
        raise InvalidInputError(f"{name} contains non-finite coordinates")
    return pts


@dataclass(frozen=True)
class PointCloud:
    """A finite set of points in a common ambient dimension D >= 2."""

    points: np.ndarray

    def __post_init__(self) -> None:
        pts = as_points(self.points, name="cloud points")
        if pts.shape[0] == 0:
            raise InvalidInputError("point cloud is empty")
        object.__setattr__(self, "points", pts)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]

    def pairwise(self) -> np.ndarray:
        return pairwise_distances(self.points)

    def diameter(self) -> float:
        return diameter(self.points)

    def translated(self, shift) -> "PointCloud":
        return PointCloud(self.points + np.asarray(shift, dtype=float))


@dataclass(frozen=True)
class ModelParams:
    """Geometric model parameters of the underlying shape.

    d is the intrinsic dimension, k the regularity order, rch_min a known
    lower bound on the reach, and f_min <= f_max bound the sampling density
    relative to the intrinsic volume. L optionally lists the higher-order
    regularity constants and is not used by the closed-form bounds.
    """

    d: int
    k: int
    rch_min: float
    f_min: float
    f_max: float
    L: tuple = field(default=())

    def __post_init__(self) -> None:
        if int(self.d) < 1:
            raise InvalidInputError(f"intrinsic dimension must be >= 1, got {self.d}")
        if int(self.k) < 2:
            raise InvalidInputError(f"regularity order must be >= 2, got {self.k}")
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "k", int(self.k))
        if not (self.rch_min > 0 and math.isfinite(self.rch_min)):
            raise InvalidInputError("rch_min must be positive and finite")
        if not (0 < self.f_min <= self.f_max):
            raise InvalidInputError("density bounds must satisfy 0 < f_min <= f_max")
        L = tuple(float(x) for x in self.L)
        if any(x < 0 or not math.isfinite(x) for x in L):
            raise InvalidInputError("regularity constants must be finite and nonnegative")
        object.__setattr__(self, "L", L)


@dataclass(frozen=True)
class FiniteMetricSpace:
    """A point cloud together with a symmetric distance table.

    Entries may be +inf (unreachable pairs). With intrinsic=True the table
    is checked against the Euclidean chords: every finite entry must be at
    least the chord. Deficits within a 1e-9 relative slack are clamped up
    to the chord; larger ones raise.
    """

    cloud: PointCloud
    table: np.ndarray
    intrinsic: bool = False

    def __post_init__(self) -> None:
        tab = np.asarray(self.table, dtype=float)
        n = len(self.cloud)
        if tab.shape != (n, n):
            raise InvalidInputError(f"metric table must have shape ({n}, {n}), got {tab.shape}")
        if np.any(np.isnan(tab)):
            raise InvalidInputError("metric table contains NaN")
        if np.any(tab < 0):
            raise InvalidInputError("metric table contains negative distances")
        if not np.all(np.diag(tab) == 0.0):
            raise InvalidInputError("metric table diagonal must be zero")
        finite = np.isfinite(tab)
        if not np.array_equal(finite, finite.T):
            raise InvalidInputError("metric table infinities are not symmetric")
        scale = float(np.max(tab[finite], initial=0.0))
        asym = np.abs(np.where(finite, tab, 0.0) - np.where(finite, tab, 0.0).T)
        if np.max(asym, initial=0.0) > 1e-9 * max(scale, 1.0):
            raise InvalidInputError("metric table is not symmetric")
        tab = np.where(finite, 0.5 * (np.where(finite, tab, 0.0) + np.where(finite, tab, 0.0).T), np.inf)
        if self.intrinsic:
            chords = self.cloud.pairwise()
            slack = INTRINSIC_REL_SLACK * max(float(chords.max()), 1e-300)
            deficit = chords - tab
            worst = float(np.max(deficit, initial=0.0))
            if worst > slack:
                i, j = np.unravel_index(int(np.argmax(deficit)), deficit.shape)
                raise InvalidInputError(
                    "table is not intrinsic: entry ({}, {}) is {:.6g} below the chord".format(
                        i, j, worst
                    )
                )
            tab = np.maximum(tab, chords)
        tab = tab.copy()
        tab[np.diag_indices(n)] = 0.0
        tab.setflags(write=False)
        object.__setattr__(self, "table", tab)

    def __len__(self) -> int:
        return len(self.cloud)


def spherical_chord_distance(r: float, chord: float) -> float:
    """Geodesic distance on a sphere of radius r between points a chord apart.

    Returns +inf when the chord exceeds the sphere diameter 2r.
    """
    if not (r > 0 and math.isfinite(r)):
        raise InvalidInputError(f"sphere radius must be positive and finite, got {r}")
    if not (chord >= 0):
        raise InvalidInputError(f"chord length must be nonnegative, got {chord}")
    if chord > 2.0 * r:
        return math.inf
    return 2.0 * r * math.asin(chord / (2.0 * r))


def spherical_distance(r: float, x, y) -> float:
    """Distance between x and y measured inside a sphere of radius r.

    The two points are placed on a round sphere of radius r an equal chord
    apart; the value is the great-circle distance, or +inf when no such
    placement exists.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise InvalidInputError("points must share a dimension")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise InvalidInputError("points contain non-finite coordinates")
    return spherical_chord_distance(r, float(np.linalg.norm(x - y)))


def pairwise_distances(points) -> np.ndarray:
    pts = as_points(points, min_dim=1)
    return cdist(pts, pts)


def diameter(points) -> float:
    pts = as_points(points, min_dim=1)
    if pts.shape[0] < 2:
        return 0.0
    return float(cdist(pts, pts).max())


def hausdorff_distance(a, b) -> float:
    """Hausdorff distance between two finite point sets."""
    pa = a.points if isinstance(a, PointCloud) else as_points(a, name="first set", min_dim=1)
    pb = b.points if isinstance(b, PointCloud) else as_points(b, name="second set", min_dim=1)
    if pa.shape[1] != pb.shape[1]:
        raise InvalidInputError("point sets must share an ambient dimension")
    d = cdist(pa, pb)
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def distance_to_set(u, points) -> float:
    """Euclidean distance from the point u to a finite set."""
    pts = as_points(points, name="set", min_dim=1)
    u = np.asarray(u, dtype=float).reshape(-1)
    if u.shape[0] != pts.shape[1]:
        raise InvalidInputError("query point dimension does not match the set")
    return float(np.min(np.linalg.norm(pts - u, axis=1)))


def nearest_points(u, points, tol: float | None = None) -> np.ndarray:
    """Indices of the nearest points of a finite set to u.

    Ties within `tol` of the minimum are all returned. The default band is
    1e-9 relative to the diameter of the scene (set plus query point), so
    exact projections with floating point jitter come back as one group.
    """
    pts = as_points(points, name="set", min_dim=1)
    u = np.asarray(u, dtype=float).reshape(-1)
    if u.shape[0] != pts.shape[1]:
        raise InvalidInputError("query point dimension does not match the set")
    dists = np.linalg.norm(pts - u, axis=1)
    if tol is None:
        scene = np.vstack([pts, u[None, :]])
        tol = NEAREST_TIE_REL_TOL * diameter(scene)
    lo = float(dists.min())
    return np.flatnonzero(dists <= lo + tol)


def _unit_ball_volume(d: int) -> float:
    # omega_d = pi^(d/2) / Gamma(d/2 + 1), evaluated in log space.
    return math.exp(0.5 * d * math.log(math.pi) - math.lgamma(0.5 * d + 1.0))


def d_max_bound(params: ModelParams) -> float:
    """Upper bound on the geodesic diameter supported by the model.

    Equals 5^d / (omega_d * f_min * rch_min^(d-1)) with omega_d the volume
    of the d-dimensional unit ball, computed via log-Gamma.
    """
    d = params.d
    return 5.0**d / (_unit_ball_volume(d) * params.f_min * params.rch_min ** (d - 1))


def jung_bound(diam: float, D: int) -> float:
    """Jung's bound on the circumradius of a set of diameter diam in R^D."""
    if not (diam >= 0):
        raise InvalidInputError(f"diameter must be nonnegative, got {diam}")
    D = int(D)
    if D < 1:
        raise InvalidInputError(f"ambient dimension must be >= 1, got {D}")
    return math.sqrt(D / (2.0 * (D + 1.0))) * diam
