"""Plug-in estimation of intrinsic metrics and distortion diagnostics.

The plug-in estimator reads distances off the neighborhood graph of the
base cloud at radius twice the offset scale: two epsilon-balls overlap
exactly when their centers are within 2*epsilon, so graph connectivity
mirrors connectivity of the offset region. Every evaluated distance is
capped at a configured diameter bound, which also stands in for pairs the
graph cannot connect.

Losses are multiplicative: sup_loss reports max |1 - d_hat/d_true|, and
mutual_distortion the worst ratio between one space's distances and the
nearest-projection distances in the other, symmetrized over directions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .errors import InvalidInputError, NumericError
from .geometry import (
    NEAREST_TIE_REL_TOL,
    FiniteMetricSpace,
    PointCloud,
    diameter,
)
from .graphs import all_pairs_geodesics, build_graph, graph_geodesic

__all__ = [
    "MetricEstimate",
    "LossReport",
    "plugin_metric",
    "plugin_metric_pairs",
    "plugin_metric_table",
    "sup_loss",
    "mutual_distortion",
    "distortion_sup_loss_bracket",
]


@dataclass(frozen=True)
class MetricEstimate:
    """Support estimate plus the scales that define the plug-in metric.

    base_cloud is the support estimate, epsilon the offset radius, and cap
    the diameter bound applied to every evaluated distance. cap may be
    +inf, in which case disconnected pairs stay infinite. The neighborhood
    graph and its all-pairs geodesics are built lazily on first use and
    reused across evaluations.
    """

    base_cloud: PointCloud
    epsilon: float
    cap: float = math.inf

    def __post_init__(self) -> None:
        if not (self.epsilon > 0 and math.isfinite(self.epsilon)):
            raise InvalidInputError(
                f"offset radius epsilon must be positive and finite, got {self.epsilon}"
            )
        if not (self.cap > 0):
            raise InvalidInputError(f"cap must be positive, got {self.cap}")
        object.__setattr__(self, "epsilon", float(self.epsilon))
        object.__setattr__(self, "cap", float(self.cap))

    def _base(self):
        cache = getattr(self, "_cache", None)
        if cache is None:
            graph = build_graph(self.base_cloud, 2.0 * self.epsilon)
            table = all_pairs_geodesics(graph)
            tree = cKDTree(self.base_cloud.points)
            cache = (graph, table, tree)
            object.__setattr__(self, "_cache", cache)
        return cache


def _point(est: MetricEstimate, p, name: str) -> np.ndarray:
    p = np.asarray(p, dtype=float).reshape(-1)
    if p.shape[0] != est.base_cloud.dim:
        raise InvalidInputError(
            f"point {name} has dimension {p.shape[0]}, cloud has {est.base_cloud.dim}"
        )
    if not np.all(np.isfinite(p)):
        raise InvalidInputError(f"point {name} contains non-finite coordinates")
    return p


def plugin_metric(est: MetricEstimate, x, y) -> float:
    """Capped offset geodesic between two ambient points.

    Shortest path between x and y on the neighborhood graph built over
    base_cloud plus the two query points at radius 2*epsilon; disconnected
    pairs return the cap. Both sweep directions are run and the smaller
    kept, so the value is exactly symmetric in (x, y).
    """
    x = _point(est, x, "x")
    y = _point(est, y, "y")
    if np.array_equal(x, y):
        return 0.0
    pts = np.vstack([est.base_cloud.points, x[None, :], y[None, :]])
    graph = build_graph(PointCloud(pts), 2.0 * est.epsilon)
    n = pts.shape[0]
    d = min(graph_geodesic(graph, n - 2, n - 1), graph_geodesic(graph, n - 1, n - 2))
    return float(min(est.cap, d))


def plugin_metric_pairs(est: MetricEstimate, pairs) -> np.ndarray:
    """Plug-in distances for a batch of fresh point pairs.

    A shortest augmented-graph path either takes the direct edge (chord at
    most 2*epsilon) or enters the base cloud once on each side, so the
    value is the minimum over base neighbors i of x and j of y of
    ||x - x_i|| + base_geodesic(i, j) + ||x_j - y||, capped. Agrees with
    plugin_metric up to the summation order of path lengths.
    """
    arr = np.asarray(pairs, dtype=float)
    dim = est.base_cloud.dim
    if arr.ndim != 3 or arr.shape[1] != 2 or arr.shape[2] != dim:
        raise InvalidInputError(f"pairs must have shape (m, 2, {dim}), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("pairs contain non-finite coordinates")
    _, table, tree = est._base()
    rho = 2.0 * est.epsilon
    xs, ys = arr[:, 0, :], arr[:, 1, :]
    chords = np.linalg.norm(xs - ys, axis=1)
    near_x = tree.query_ball_point(xs, rho)
    near_y = tree.query_ball_point(ys, rho)
    base = est.base_cloud.points
    out = np.empty(arr.shape[0])
    for m in range(arr.shape[0]):
        best = chords[m] if chords[m] <= rho else math.inf
        ii = np.asarray(near_x[m], dtype=int)
        jj = np.asarray(near_y[m], dtype=int)
        if ii.size and jj.size:
            dx = np.linalg.norm(base[ii] - xs[m], axis=1)
            dy = np.linalg.norm(base[jj] - ys[m], axis=1)
            through = float(np.min(dx[:, None] + table[np.ix_(ii, jj)] + dy[None, :]))
            best = min(best, through)
        out[m] = min(est.cap, best)
    return out


def plugin_metric_table(est: MetricEstimate) -> FiniteMetricSpace:
    """All-pairs plug-in metric restricted to the base cloud, capped.

    Declared intrinsic: graph paths dominate chords, so validation only
    rejects a cap below some chord, which signals a diameter bound
    inconsistent with the data.
    """
    _, table, _ = est._base()
    capped = np.minimum(table, est.cap)
    np.fill_diagonal(capped, 0.0)
    return FiniteMetricSpace(est.base_cloud, capped, intrinsic=True)


@dataclass(frozen=True)
class LossReport:
    """Relative sup-losses of a distance estimate over finite pair sets.

    l_n is the maximum of |1 - d_hat/d_true| over the primary pairs and
    l_inf the maximum over primary and test pairs together, so l_n <=
    l_inf always holds. worst_pair is the position of the argmax in the
    combined sequence, primary pairs first.
    """

    l_n: float
    l_inf: float
    worst_pair: int

    def __post_init__(self) -> None:
        if self.l_n < 0 or self.l_inf < self.l_n:
            raise InvalidInputError("losses must satisfy 0 <= l_n <= l_inf")


def _pairs_array(pairs, name: str) -> np.ndarray:
    arr = np.asarray(pairs, dtype=float)
    if arr.size == 0:
        return arr.reshape(0, 2, 1)
    if arr.ndim != 3 or arr.shape[1] != 2:
        raise InvalidInputError(f"{name} must have shape (m, 2, dim), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} contain non-finite coordinates")
    return arr


def _evaluate(fn_or_values, pairs: np.ndarray, name: str) -> np.ndarray:
    if callable(fn_or_values):
        return np.array([float(fn_or_values(p[0], p[1])) for p in pairs], dtype=float)
    vals = np.asarray(fn_or_values, dtype=float).reshape(-1)
    if vals.shape[0] != pairs.shape[0]:
        raise InvalidInputError(
            f"{name} has {vals.shape[0]} values for {pairs.shape[0]} pairs"
        )
    return vals


def sup_loss(d_hat, d_true, pairs, test_pairs=None) -> LossReport:
    """Relative sup-loss max |1 - d_hat/d_true| over point pairs.

    d_hat and d_true are either callables of two points or sequences of
    precomputed values aligned with the pairs (primary pairs first, then
    test pairs). Zero or negative true distances are rejected: the loss is
    multiplicative. l_n covers the primary pairs alone; l_inf extends the
    maximum over the optional test pairs.
    """
    primary = _pairs_array(pairs, "pairs")
    if primary.shape[0] == 0:
        raise InvalidInputError("sup_loss needs at least one pair")
    extra = _pairs_array(test_pairs, "test_pairs") if test_pairs is not None else None
    if extra is None or extra.shape[0] == 0:
        all_pairs = primary
    else:
        if extra.shape[2] != primary.shape[2]:
            raise InvalidInputError("test pairs live in a different dimension")
        all_pairs = np.concatenate([primary, extra])
    hat = _evaluate(d_hat, all_pairs, "d_hat")
    true = _evaluate(d_true, all_pairs, "d_true")
    if np.any(~(true > 0)):
        raise InvalidInputError("true distances must be positive on every pair")
    loss = np.abs(1.0 - hat / true)
    m = primary.shape[0]
    l_n = float(np.max(loss[:m]))
    l_inf = float(np.max(loss))
    return LossReport(l_n, max(l_inf, l_n), int(np.argmax(loss)))


def _projection_sets(src: np.ndarray, ref: np.ndarray, tol: float) -> list[np.ndarray]:
    tree = cKDTree(ref)
    d, idx = tree.query(src)
    sets = [np.array([j], dtype=int) for j in np.atleast_1d(idx)]
    d = np.atleast_1d(d)
    for i in range(src.shape[0]):
        cand = tree.query_ball_point(src[i], d[i] + tol)
        if len(cand) > 1:
            cand = np.asarray(cand, dtype=int)
            dd = np.linalg.norm(ref[cand] - src[i], axis=1)
            sets[i] = np.sort(cand[dd <= d[i] + tol])
    return sets


def _directed_distortion(
    src: FiniteMetricSpace, ref: FiniteMetricSpace, delta: float, tol: float
) -> float:
    pts = src.cloud.points
    n = pts.shape[0]
    sep = src.cloud.pairwise() >= delta
    np.fill_diagonal(sep, False)
    if not np.any(sep):
        return 0.0
    proj = _projection_sets(pts, ref.cloud.points, tol)
    ref_tab = ref.table
    # den[i, j] = min over a in proj(i), b in proj(j) of ref distance a-b
    rows = np.stack([ref_tab[p].min(axis=0) for p in proj])
    den = np.stack([rows[:, p].min(axis=1) for p in proj], axis=1)
    num = src.table
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = num / den
    ratio[num == 0.0] = 0.0
    ratio[(den == 0.0) & (num > 0.0)] = math.inf
    # Matched infinities agree; a finite value against an unreachable
    # reference pair contributes nothing.
    both_inf = np.isinf(num) & np.isinf(den)
    ratio[both_inf] = 1.0
    ratio[np.isfinite(num) & np.isinf(den)] = 0.0
    worst = float(np.max(ratio[sep]))
    return worst


def mutual_distortion(
    space_a: FiniteMetricSpace,
    space_b: FiniteMetricSpace,
    delta: float,
    *,
    tie_tol: float | None = None,
) -> float:
    """Worst multiplicative discrepancy between two finite metric spaces.

    One direction takes every pair of one cloud at Euclidean separation at
    least delta, projects both points to their nearest points in the other
    cloud (near-ties within tie_tol all count), and divides the source
    distance by the smallest distance among the projected pairs. The
    result is the larger supremum of the two directions. A direction with
    no separated pairs contributes 0, so delta beyond both diameters gives
    0; a collapsed projection under a positive numerator gives +inf.
    """
    if not (delta > 0 and math.isfinite(delta)):
        raise InvalidInputError(f"separation delta must be positive and finite, got {delta}")
    if space_a.cloud.dim != space_b.cloud.dim:
        raise InvalidInputError("clouds live in different ambient dimensions")
    if tie_tol is None:
        scene = np.vstack([space_a.cloud.points, space_b.cloud.points])
        tie_tol = NEAREST_TIE_REL_TOL * diameter(scene)
    return max(
        _directed_distortion(space_b, space_a, delta, tie_tol),
        _directed_distortion(space_a, space_b, delta, tie_tol),
    )


def distortion_sup_loss_bracket(
    space: FiniteMetricSpace, d_hat, tol: float = 0.0
) -> tuple[float, float, float]:
    """Bracket of the small-separation distortion by the relative sup-loss.

    Returns (l_inf + 1, D_0, (1 - l_inf)^(-1)) where l_inf is the relative
    sup-loss of d_hat against the space's table over off-diagonal pairs
    and D_0 the mutual distortion at delta equal to the smallest positive
    pair separation. The chain lower <= value <= upper is verified up to
    tol and a violation raises NumericError; the upper bound is +inf once
    l_inf >= 1.
    """
    if isinstance(d_hat, FiniteMetricSpace):
        if not np.array_equal(d_hat.cloud.points, space.cloud.points):
            raise InvalidInputError("both metrics must live on the same cloud")
        hat_space = d_hat
    else:
        hat_space = FiniteMetricSpace(space.cloud, np.asarray(d_hat, dtype=float))
    n = len(space)
    if n < 2:
        raise InvalidInputError("bracket needs at least two points")
    iu = np.triu_indices(n, k=1)
    true = space.table[iu]
    hat = hat_space.table[iu]
    if np.any(~(true > 0)):
        raise InvalidInputError("bracket requires positive off-diagonal distances")
    l_inf = float(np.max(np.abs(1.0 - hat / true)))
    chords = space.cloud.pairwise()[iu]
    positive = chords[chords > 0]
    if positive.size == 0:
        raise InvalidInputError("all points coincide; no positive separation exists")
    delta0 = float(positive.min())
    value = mutual_distortion(space, hat_space, delta0)
    lower = 1.0 + l_inf
    upper = 1.0 / (1.0 - l_inf) if l_inf < 1.0 else math.inf
    # The chain can hold with equality, and its two sides come out of
    # different float paths, so allow a few ulps beyond the caller's tol.
    slack = 32.0 * np.finfo(float).eps * max(1.0, abs(value))
    if lower > value + tol + slack or (
        math.isfinite(upper) and value > upper + tol + slack
    ):
        raise NumericError(
            f"distortion bracket violated: {lower} <= {value} <= {upper} fails at tol {tol}"
        )
    return lower, value, upper
