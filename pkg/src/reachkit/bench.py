"""Convergence sweeps: sample, estimate, compare to oracle, fit rates.

A sweep runs one estimator over a grid of sample sizes with replicated
seeds, records one row per run, and never aborts on an estimator failure;
the row's status carries the error class instead. Rows are sorted by
(n, seed) before writing so output bytes are deterministic regardless of
execution order, and runtime_ms is 0.0 unless timing is requested, for
the same reason. Replicates are independent: each derives its own RNG
stream from the master seed, with distinct streams across the grid.

Per-n summary uses the median, not the mean: sup-type losses are heavy
tailed under rare graph disconnections. The rate fit is ordinary least
squares of log median error on log n with a bootstrap CI over replicates.
Truth columns come from shape oracles: 0.0 for metric sup-loss, the weak
feature size for the ratio radius, the curvature radius and the reach for
their estimators.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    IllConditionedError,
    InsufficientDataError,
    InvalidInputError,
    NumericError,
    ReachkitError,
    ResolutionError,
)
from .geometry import ModelParams, PointCloud
from .localpoly import curvature_radius_estimate
from .metricest import MetricEstimate, plugin_metric_table
from .reach import ReachConfig, reach_estimate, sdr_plugin
from .rng import rng_stream
from .synth import Shape, make_shape, oracle_metric, sample

__all__ = [
    "BenchRow",
    "ExperimentConfig",
    "RateFit",
    "run_experiment",
    "fit_rate",
    "rows_to_csv",
    "write_rows",
    "read_rows",
    "write_svg_plot",
    "ESTIMATORS",
]

_CSV_VERSION = "# reachkit-csv v1"
_CSV_COLUMNS = "n,seed,estimator,value,truth,abs_err,rel_err,runtime_ms,status"

_STATUS = {
    InvalidInputError: "invalid-input",
    InsufficientDataError: "insufficient-data",
    ResolutionError: "resolution",
    NumericError: "numeric",
    IllConditionedError: "ill-conditioned",
}


@dataclass(frozen=True)
class BenchRow:
    """One estimator run. Failed runs carry nan values and status != ok."""

    n: int
    seed: int
    estimator: str
    value: float
    truth: float
    abs_err: float
    rel_err: float
    runtime_ms: float
    status: str


@dataclass(frozen=True)
class ExperimentConfig:
    """One sweep: shape, estimator, sample-size grid, replicates, knobs.

    knobs is estimator-specific: epsilon or (epsilon_rule="log-over-n",
    epsilon_scale) for graph-metric offsets, delta, h, t, stride, grid,
    and the model-parameter overrides d, k, rch_min, f_min, f_max. The
    density defaults keep the scale cap inactive; supply real bounds to
    exercise it. timing=True fills runtime_ms and gives up byte-identical
    reruns.
    """

    shape_kind: str
    shape_params: dict
    estimator: str
    n_grid: tuple
    replicates: int
    seed: int
    knobs: dict = field(default_factory=dict)
    timing: bool = False
    output: str | None = None

    def __post_init__(self) -> None:
        if self.estimator not in ESTIMATORS:
            raise InvalidInputError(
                f"unknown estimator {self.estimator!r}; "
                f"available: {', '.join(sorted(ESTIMATORS))}"
            )
        grid = tuple(int(n) for n in self.n_grid)
        if not grid or any(b <= a for a, b in zip(grid, grid[1:])):
            raise InvalidInputError("n_grid must be non-empty and strictly increasing")
        if any(n < 1 for n in grid):
            raise InvalidInputError("sample sizes must be >= 1")
        object.__setattr__(self, "n_grid", grid)
        if int(self.replicates) < 1:
            raise InvalidInputError(f"replicates must be >= 1, got {self.replicates}")
        object.__setattr__(self, "replicates", int(self.replicates))
        if int(self.replicates) > 65535:
            raise InvalidInputError("replicates must be < 65536 for seed derivation")
        object.__setattr__(self, "seed", int(self.seed))


@dataclass(frozen=True)
class RateFit:
    """Least-squares fit of log median error against log n.

    flat marks the degenerate all-zero-error case, where no slope is
    identifiable and zero is reported with a nan intercept. ci is the
    bootstrap percentile interval of the slope (200 median resamples).
    """

    slope: float
    intercept: float
    n_values: tuple
    medians: tuple
    iqr_low: tuple
    iqr_high: tuple
    ci: tuple
    flat: bool


def _row_seed(master: int, n: int, rep: int) -> int:
    # Injective in (n, rep) for rep < 65536, so streams never collide in a sweep.
    return master * 10**12 + n * 65536 + rep


def _resolve_epsilon(knobs: dict, n: int) -> float:
    if "epsilon" in knobs:
        return float(knobs["epsilon"])
    if knobs.get("epsilon_rule") == "log-over-n":
        return float(knobs.get("epsilon_scale", 1.0)) * math.log(n) / n
    raise InvalidInputError(
        "graph-metric estimators need knobs['epsilon'] or epsilon_rule='log-over-n'"
    )


def _model_params(shape: Shape, knobs: dict) -> ModelParams:
    oracle = shape.oracle()
    return ModelParams(
        d=int(knobs.get("d", shape.intrinsic_dim)),
        k=int(knobs.get("k", 3)),
        rch_min=float(knobs.get("rch_min", oracle.reach / 2.0)),
        f_min=float(knobs.get("f_min", 1e-6)),
        f_max=float(knobs.get("f_max", 1.0)),
    )


def _run_metric(shape: Shape, cloud: PointCloud, knobs: dict) -> tuple[float, float]:
    est = MetricEstimate(cloud, _resolve_epsilon(knobs, len(cloud)))
    hat = plugin_metric_table(est).table
    true = oracle_metric(shape, cloud).table
    mask = ~np.eye(len(cloud), dtype=bool)
    h, t = hat[mask], true[mask]
    both_inf = np.isinf(h) & np.isinf(t)
    with np.errstate(invalid="ignore"):
        ratio = np.where(np.isinf(t), 0.0, h / np.where(np.isinf(t), 1.0, t))
    loss = np.abs(1.0 - ratio)
    loss[both_inf] = 0.0
    return float(np.max(loss)), 0.0


def _run_sdr(shape: Shape, cloud: PointCloud, knobs: dict) -> tuple[float, float]:
    params = _model_params(shape, knobs)
    delta = float(knobs.get("delta", params.rch_min / 2.0))
    value = sdr_plugin(cloud, params, _resolve_epsilon(knobs, len(cloud)), delta)
    return value, shape.oracle().wfs


def _run_curvature(shape: Shape, cloud: PointCloud, knobs: dict) -> tuple[float, float]:
    params = _model_params(shape, knobs)
    est = curvature_radius_estimate(
        cloud,
        params,
        h=knobs.get("h"),
        t=knobs.get("t"),
        grid=int(knobs.get("grid", 9)),
        stride=int(knobs.get("stride", 1)),
        C=float(knobs.get("C", 1.0)),
    )
    return est.R_ell_hat, shape.oracle().r_ell


def _run_reach(shape: Shape, cloud: PointCloud, knobs: dict) -> tuple[float, float]:
    params = _model_params(shape, knobs)
    cfg = ReachConfig(
        delta=knobs.get("delta"),
        epsilon_n=_resolve_epsilon(knobs, len(cloud)),
        h=knobs.get("h"),
        t=knobs.get("t"),
        grid=int(knobs.get("grid", 9)),
        stride=int(knobs.get("stride", 1)),
        C=float(knobs.get("C", 1.0)),
    )
    return reach_estimate(cloud, params, cfg).rch_hat, shape.oracle().reach


ESTIMATORS = {
    "metric": _run_metric,
    "sdr": _run_sdr,
    "curvature": _run_curvature,
    "reach": _run_reach,
}


def _compute_row(cfg: ExperimentConfig, n: int, rep: int) -> BenchRow:
    shape = make_shape(cfg.shape_kind, **cfg.shape_params)
    runner = ESTIMATORS[cfg.estimator]
    seed = _row_seed(cfg.seed, n, rep)
    cloud = sample(shape, n, seed)
    start = time.perf_counter() if cfg.timing else 0.0
    try:
        value, truth = runner(shape, cloud, cfg.knobs)
        status = "ok"
    except ReachkitError as exc:
        value = truth = math.nan
        status = _STATUS.get(type(exc), "error")
    runtime_ms = (time.perf_counter() - start) * 1e3 if cfg.timing else 0.0
    if status == "ok":
        abs_err = abs(value - truth)
        rel_err = (
            abs_err / abs(truth)
            if truth != 0 and math.isfinite(truth)
            else math.nan
        )
    else:
        abs_err = rel_err = math.nan
    return BenchRow(n, seed, cfg.estimator, value, truth, abs_err, rel_err, runtime_ms, status)


def _compute_row_task(task: tuple[ExperimentConfig, int, int]) -> BenchRow:
    return _compute_row(*task)


def run_experiment(cfg: ExperimentConfig, workers: int = 1) -> list[BenchRow]:
    """Execute the sweep and return its rows sorted by (n, seed).

    Estimator failures from the library's error taxonomy become rows with
    the matching status and nan values; they never abort the sweep. Rows
    are independent, each seeded from (master seed, n, replicate), so
    workers > 1 farms them out to that many processes and the output is
    identical to a sequential run. When cfg.output is set the rows are
    also written there.
    """
    make_shape(cfg.shape_kind, **cfg.shape_params)
    tasks = [(cfg, n, rep) for n in cfg.n_grid for rep in range(cfg.replicates)]
    workers = int(workers)
    if workers < 1:
        raise InvalidInputError(f"workers must be >= 1, got {workers}")
    if workers > 1 and len(tasks) > 1:
        import multiprocessing

        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(min(workers, len(tasks))) as pool:
            rows = pool.map(_compute_row_task, tasks, chunksize=1)
    else:
        rows = [_compute_row(*task) for task in tasks]
    rows.sort(key=lambda r: (r.n, r.seed))
    if cfg.output is not None:
        write_rows(cfg.output, rows)
    return rows


def rows_to_csv(rows) -> str:
    """Rows in the versioned CSV schema; floats round-trip exactly."""
    lines = [_CSV_VERSION, _CSV_COLUMNS]
    for r in rows:
        lines.append(
            f"{r.n},{r.seed},{r.estimator},{r.value!r},{r.truth!r},"
            f"{r.abs_err!r},{r.rel_err!r},{r.runtime_ms!r},{r.status}"
        )
    return "\n".join(lines) + "\n"


def write_rows(path: str, rows) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(rows_to_csv(rows))


def read_rows(path: str) -> list[BenchRow]:
    with open(path, encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    if not lines or lines[0] != _CSV_VERSION:
        raise InvalidInputError(f"not a reachkit CSV v1 file: {path}")
    if len(lines) < 2 or lines[1] != _CSV_COLUMNS:
        raise InvalidInputError(f"unexpected column header in {path}")
    rows = []
    for ln in lines[2:]:
        parts = ln.split(",")
        if len(parts) != 9:
            raise InvalidInputError(f"malformed row in {path}: {ln!r}")
        rows.append(
            BenchRow(
                n=int(parts[0]),
                seed=int(parts[1]),
                estimator=parts[2],
                value=float(parts[3]),
                truth=float(parts[4]),
                abs_err=float(parts[5]),
                rel_err=float(parts[6]),
                runtime_ms=float(parts[7]),
                status=parts[8],
            )
        )
    return rows


def _group_errors(rows) -> dict[int, np.ndarray]:
    groups: dict[int, list] = {}
    for r in rows:
        if r.status == "ok" and math.isfinite(r.abs_err):
            groups.setdefault(r.n, []).append(r.abs_err)
    return {n: np.asarray(v) for n, v in sorted(groups.items())}


def fit_rate(rows, resamples: int = 200) -> RateFit:
    """Slope of log median error in log n over the sweep's ok rows.

    Needs at least three distinct n with usable rows; grid points whose
    median error is zero are left out of the fit, and if fewer than three
    remain the flat flag is set with a zero slope. The CI resamples
    replicate errors within each n and refits the medians.
    """
    groups = _group_errors(rows)
    if len(groups) < 3:
        raise InvalidInputError(
            f"rate fit needs >= 3 distinct sample sizes with usable rows, got {len(groups)}"
        )
    ns = np.array(list(groups))
    medians = np.array([float(np.median(groups[n])) for n in ns])
    q1 = np.array([float(np.percentile(groups[n], 25)) for n in ns])
    q3 = np.array([float(np.percentile(groups[n], 75)) for n in ns])
    positive = medians > 0
    summary = dict(
        n_values=tuple(int(n) for n in ns),
        medians=tuple(medians),
        iqr_low=tuple(q1),
        iqr_high=tuple(q3),
    )
    if int(np.sum(positive)) < 3:
        return RateFit(slope=0.0, intercept=math.nan, ci=(0.0, 0.0), flat=True, **summary)
    x = np.log(ns[positive].astype(float))
    y = np.log(medians[positive])
    slope, intercept = np.polyfit(x, y, 1)

    rng = rng_stream(911, 1)
    boot = []
    for _ in range(int(resamples)):
        med_b = np.array(
            [float(np.median(rng.choice(groups[n], size=groups[n].size))) for n in ns]
        )
        keep = med_b > 0
        if int(np.sum(keep)) < 3:
            continue
        s_b, _ = np.polyfit(np.log(ns[keep].astype(float)), np.log(med_b[keep]), 1)
        boot.append(s_b)
    if boot:
        ci = (float(np.percentile(boot, 2.5)), float(np.percentile(boot, 97.5)))
    else:
        ci = (float(slope), float(slope))
    return RateFit(slope=float(slope), intercept=float(intercept), ci=ci, flat=False, **summary)


def write_svg_plot(path: str, fit: RateFit) -> None:
    """Log-log line plot of the per-n medians with the fitted slope."""
    W, H, M = 480, 320, 48
    xs = np.log(np.asarray(fit.n_values, dtype=float))
    ys = np.array([math.log(m) if m > 0 else math.nan for m in fit.medians])
    finite = np.isfinite(ys)
    if not np.any(finite):
        ys = np.zeros_like(xs)
        finite = np.ones_like(xs, dtype=bool)
    x_lo, x_hi = float(np.min(xs)), float(np.max(xs))
    y_lo, y_hi = float(np.min(ys[finite])), float(np.max(ys[finite]))
    x_span = (x_hi - x_lo) or 1.0
    y_span = (y_hi - y_lo) or 1.0

    def px(x: float) -> float:
        return M + (x - x_lo) / x_span * (W - 2 * M)

    def py(y: float) -> float:
        return H - M - (y - y_lo) / y_span * (H - 2 * M)

    pts = " ".join(
        f"{px(x):.1f},{py(y):.1f}" for x, y in zip(xs[finite], ys[finite])
    )
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
        f'viewBox="0 0 {W} {H}">',
        f'<rect x="{M}" y="{M}" width="{W - 2 * M}" height="{H - 2 * M}" '
        'fill="none" stroke="#888"/>',
        f'<polyline points="{pts}" fill="none" stroke="#1f77b4" stroke-width="2"/>',
    ]
    for x, y in zip(xs[finite], ys[finite]):
        parts.append(f'<circle cx="{px(x):.1f}" cy="{py(y):.1f}" r="3" fill="#1f77b4"/>')
    if not fit.flat:
        ya, yb = fit.intercept + fit.slope * x_lo, fit.intercept + fit.slope * x_hi
        parts.append(
            f'<line x1="{px(x_lo):.1f}" y1="{py(ya):.1f}" x2="{px(x_hi):.1f}" '
            f'y2="{py(yb):.1f}" stroke="#d62728" stroke-dasharray="5,3"/>'
        )
    parts.append(
        f'<text x="{M}" y="{M - 10}" font-family="monospace" font-size="12">'
        f"log median error vs log n, slope {fit.slope:.3f}</text>"
    )
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts) + "\n")
