"""Combined reach estimation: curvature radius against spherical ratio.

The reach of a set is the smaller of a local scale, the minimal curvature
radius, and a global one, the spherical distortion radius of its metric.
Both are estimated from the same sample, the curvature radius from local
polynomial patches and the ratio radius from the plug-in graph metric, and
the reported reach is their minimum with the attaining branch named. The
two branches share nothing and could run concurrently; here they run in
sequence and the report is assembled afterwards.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError
from .geometry import (
    FiniteMetricSpace,
    ModelParams,
    PointCloud,
    d_max_bound,
    jung_bound,
)
from .localpoly import bandwidth, curvature_radius_estimate, default_tensor_cap
from .metricest import MetricEstimate, plugin_metric_table
from .sdr import sdr_value

__all__ = [
    "ReachConfig",
    "ReachReport",
    "TuningResult",
    "adaptive_tuning",
    "sdr_plugin",
    "reach_estimate",
    "oracle_reach_federer",
]

# Relative gap below which the two branches count as tied.
_TIE_REL_TOL = 1e-6


@dataclass(frozen=True)
class TuningResult:
    """Sample-size driven tuning: delta_n = 1/log n, epsilon_n = log n (log n / n)^(k/d)."""

    epsilon_n: float
    delta_n: float


@dataclass(frozen=True)
class ReachConfig:
    """Knobs for the combined estimator.

    Unset values resolve inside reach_estimate: delta to rch_min/2,
    epsilon_n, h and t to their sample-size defaults. adaptive switches
    delta and epsilon_n to the log-n tuning sequences, trading constants
    for parameter-freeness.
    """

    delta: float | None = None
    epsilon_n: float | None = None
    adaptive: bool = False
    h: float | None = None
    t: float | None = None
    grid: int = 9
    stride: int = 1
    C: float = 1.0
    max_iters: int = 20
    tol: float = 1e-10


@dataclass(frozen=True)
class ReachReport:
    """Result of the combined estimator.

    regime records which branch attains the minimum: "local" for the
    curvature radius, "global" for the ratio radius, "tie" when they
    agree to within a relative 1e-6.
    """

    rch_hat: float
    r_ell_hat: float
    sdr_hat: float
    regime: str
    tuning: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.regime not in ("local", "global", "tie"):
            raise InvalidInputError(f"unknown regime {self.regime!r}")
        if self.rch_hat != min(self.r_ell_hat, self.sdr_hat):
            raise InvalidInputError("reach must equal the smaller branch value")


def adaptive_tuning(n: int, d: int, k: int) -> TuningResult:
    """The log-n tuning sequences for separation and offset."""
    if int(n) < 8:
        raise InvalidInputError(f"adaptive tuning needs n >= 8, got {n}")
    if int(d) < 1 or int(k) < 2:
        raise InvalidInputError(f"need d >= 1 and k >= 2, got d={d}, k={k}")
    n, d, k = int(n), int(d), int(k)
    log_n = math.log(n)
    return TuningResult(
        epsilon_n=log_n * (log_n / n) ** (k / d),
        delta_n=1.0 / log_n,
    )


def sdr_plugin(
    cloud: PointCloud, params: ModelParams, epsilon_n: float, delta: float
) -> float:
    """Ratio radius of the plug-in graph metric, capped at the scale bound.

    Builds the offset-epsilon_n graph metric on the sample, computes the
    delta-separated ratio radius, and caps it at s_max, the Jung bound of
    the model's diameter bound.
    """
    if not (epsilon_n > 0 and math.isfinite(epsilon_n)):
        raise InvalidInputError(f"offset must be positive and finite, got {epsilon_n}")
    if not (0.0 < delta < params.rch_min):
        raise InvalidInputError(
            f"separation must lie in (0, rch_min={params.rch_min}), got {delta}"
        )
    est = MetricEstimate(cloud, epsilon_n)
    space: FiniteMetricSpace = plugin_metric_table(est)
    value = sdr_value(space, delta)
    s_max = jung_bound(d_max_bound(params), cloud.dim)
    return float(min(value, s_max))


def reach_estimate(
    cloud: PointCloud, params: ModelParams, cfg: ReachConfig | None = None
) -> ReachReport:
    """Minimum of the curvature radius and the plug-in ratio radius."""
    cfg = cfg or ReachConfig()
    n = len(cloud)
    delta, epsilon_n = cfg.delta, cfg.epsilon_n
    if cfg.adaptive:
        tuned = adaptive_tuning(n, params.d, params.k)
        delta = tuned.delta_n if delta is None else delta
        epsilon_n = tuned.epsilon_n if epsilon_n is None else epsilon_n
    if delta is None:
        delta = params.rch_min / 2.0
    if epsilon_n is None:
        epsilon_n = adaptive_tuning(n, params.d, params.k).epsilon_n
    h = bandwidth(params, n, cfg.C) if cfg.h is None else float(cfg.h)
    t = default_tensor_cap(h, params.k) if cfg.t is None else float(cfg.t)

    curvature = curvature_radius_estimate(
        cloud,
        params,
        h=h,
        t=t,
        grid=cfg.grid,
        stride=cfg.stride,
        max_iters=cfg.max_iters,
        tol=cfg.tol,
    )
    r_ell = curvature.R_ell_hat
    sdr_hat = sdr_plugin(cloud, params, epsilon_n, delta)

    rch_hat = min(r_ell, sdr_hat)
    if r_ell == sdr_hat or (
        math.isfinite(rch_hat) and abs(r_ell - sdr_hat) < _TIE_REL_TOL * rch_hat
    ):
        regime = "tie"
    elif r_ell < sdr_hat:
        regime = "local"
    else:
        regime = "global"
    return ReachReport(
        rch_hat=rch_hat,
        r_ell_hat=r_ell,
        sdr_hat=sdr_hat,
        regime=regime,
        tuning={"epsilon_n": float(epsilon_n), "delta": float(delta), "h": h, "t": t},
    )


def oracle_reach_federer(cloud: PointCloud, tangents) -> float:
    """Exhaustive tangent-space reach formula over sampled pairs.

    min over p != q of ||p - q||^2 / (2 dist(q - p, T_p)), with tangents
    given as per-point orthogonal projectors. Pairs whose offset lies in
    the tangent plane are skipped; if every pair is flat the result is
    +inf. A test oracle: it needs true tangents, so it is not an estimator.
    """
    pts = cloud.points
    n, D = pts.shape
    proj = np.asarray(tangents, dtype=float)
    if proj.shape != (n, D, D):
        raise InvalidInputError(
            f"need one {D}x{D} tangent projector per point, got shape {proj.shape}"
        )
    best = math.inf
    for i in range(n):
        q = np.delete(pts, i, axis=0) - pts[i]
        normal = q - q @ proj[i].T
        den = np.linalg.norm(normal, axis=1)
        num = np.sum(q**2, axis=1)
        keep = den > 0.0
        if np.any(keep):
            best = min(best, float(np.min(num[keep] / (2.0 * den[keep]))))
    return best
