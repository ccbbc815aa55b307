"""HTTP service exposing the estimators over JSON.

Endpoints wrap the library one-to-one: /sample, /metric/pairs,
/metric/table, /sdr, /curvature, /reach, /bench, /fit-rate, /health.
The CLI can act as a thin client of these routes; both surfaces produce
the same numbers because both call the same functions.

JSON carries no non-finite floats, so every length field travels as
`float | null` with null meaning +inf (an unreachable pair, a flat
curvature radius). The exceptions are bench rows, where a null on a
failed row stands for nan, and the curvature/reach knobs h and t, where
null means "choose automatically". Library errors map to HTTP status:
invalid input 422, numeric failure 500, each with a stable `kind` slug.
"""

from __future__ import annotations

import math

import numpy as np
from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .bench import BenchRow, ExperimentConfig, fit_rate, run_experiment
from .errors import InvalidInputError, NumericError, ReachkitError, error_slug
from .geometry import FiniteMetricSpace, ModelParams, PointCloud
from .io import unwire_float, wire_float
from .localpoly import (
    PatchConfig,
    bandwidth,
    default_tensor_cap,
    fit_patch,
    min_curvature_radius,
)
from .metricest import MetricEstimate, plugin_metric_table
from .reach import ReachConfig, reach_estimate
from .sdr import sdr_delta
from .synth import make_shape, sample

__all__ = ["create_app", "app"]


class SampleRequest(BaseModel):
    shape: str
    params: dict[str, float] = Field(default_factory=dict)
    n: int
    seed: int = 0


class SampleResponse(BaseModel):
    points: list[list[float]]


class MetricPairsRequest(BaseModel):
    points: list[list[float]]
    epsilon: float
    cap: float | None = None
    pairs: list[tuple[int, int]]


class MetricPairsResponse(BaseModel):
    d_hat: list[float | None]


class MetricTableRequest(BaseModel):
    points: list[list[float]]
    epsilon: float
    cap: float | None = None


class MetricTableResponse(BaseModel):
    table: list[list[float | None]]


class SdrRequest(BaseModel):
    points: list[list[float]]
    delta: float
    epsilon: float | None = None
    cap: float | None = None
    table: list[list[float | None]] | None = None
    include_pairs: bool = False


class SdrResponse(BaseModel):
    value: float | None
    floor: float
    critical_pair: tuple[int, int] | None
    pair_indices: list[tuple[int, int]] | None = None
    pair_radii: list[float | None] | None = None


class CurvatureRequest(BaseModel):
    points: list[list[float]]
    d: int
    k: int
    h: float | None = None
    t: float | None = None
    grid: int = 9
    stride: int = 1
    f_min: float = 1e-6
    f_max: float = 1.0
    C: float = 1.0


class PatchSummary(BaseModel):
    patch: int
    base_index: int
    min_radius: float | None
    objective: float
    n_window: int


class CurvatureResponse(BaseModel):
    R_ell_hat: float | None
    flat: bool
    arg_patch: int | None
    arg_offset: list[float] | None
    patches: list[PatchSummary]
    h: float
    t: float


class ParamsModel(BaseModel):
    d: int
    k: int
    rch_min: float
    f_min: float
    f_max: float


class ReachRequest(BaseModel):
    points: list[list[float]]
    params: ParamsModel
    delta: float | None = None
    epsilon_n: float | None = None
    adaptive: bool = False
    h: float | None = None
    t: float | None = None
    grid: int = 9
    stride: int = 1
    C: float = 1.0


class ReachResponse(BaseModel):
    rch_hat: float | None
    r_ell_hat: float | None
    sdr_hat: float | None
    regime: str
    tuning: dict[str, float]


class BenchRowModel(BaseModel):
    n: int
    seed: int
    estimator: str
    value: float | None
    truth: float | None
    abs_err: float | None
    rel_err: float | None
    runtime_ms: float
    status: str


class BenchRequest(BaseModel):
    shape: str
    params: dict[str, float] = Field(default_factory=dict)
    estimator: str
    n_grid: list[int]
    replicates: int = 1
    seed: int = 0
    knobs: dict[str, float | str] = Field(default_factory=dict)
    timing: bool = False


class BenchResponse(BaseModel):
    rows: list[BenchRowModel]


class FitRateRequest(BaseModel):
    rows: list[BenchRowModel]


class FitRateResponse(BaseModel):
    slope: float
    intercept: float | None
    n_values: list[int]
    medians: list[float]
    iqr_low: list[float]
    iqr_high: list[float]
    ci: tuple[float, float]
    flat: bool


def _cloud(points: list[list[float]]) -> PointCloud:
    return PointCloud(np.asarray(points, dtype=float))


def _row_to_model(r: BenchRow) -> BenchRowModel:
    return BenchRowModel(
        n=r.n,
        seed=r.seed,
        estimator=r.estimator,
        value=wire_float(r.value),
        truth=wire_float(r.truth),
        abs_err=wire_float(r.abs_err),
        rel_err=wire_float(r.rel_err),
        runtime_ms=r.runtime_ms,
        status=r.status,
    )


def _row_from_model(m: BenchRowModel) -> BenchRow:
    missing = math.inf if m.status == "ok" else math.nan
    return BenchRow(
        n=m.n,
        seed=m.seed,
        estimator=m.estimator,
        value=unwire_float(m.value, missing=missing),
        truth=unwire_float(m.truth, missing=missing),
        abs_err=unwire_float(m.abs_err, missing=missing),
        rel_err=unwire_float(m.rel_err, missing=math.nan),
        runtime_ms=m.runtime_ms,
        status=m.status,
    )


def create_app() -> FastAPI:
    app = FastAPI(title="reachkit", version="0.1.0")

    @app.exception_handler(ReachkitError)
    async def _reachkit_error(request, exc: ReachkitError):
        status = 422 if isinstance(exc, InvalidInputError) else 500
        if isinstance(exc, NumericError):
            status = 500
        return JSONResponse(
            status_code=status,
            content={"detail": str(exc), "kind": error_slug(exc)},
        )

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "service": "reachkit", "version": "0.1.0"}

    @app.post("/sample", response_model=SampleResponse)
    def sample_route(req: SampleRequest) -> SampleResponse:
        shape = make_shape(req.shape, **req.params)
        cloud = sample(shape, req.n, req.seed)
        return SampleResponse(points=cloud.points.tolist())

    @app.post("/metric/pairs", response_model=MetricPairsResponse)
    def metric_pairs_route(req: MetricPairsRequest) -> MetricPairsResponse:
        cloud = _cloud(req.points)
        est = MetricEstimate(cloud, req.epsilon, unwire_float(req.cap))
        table = plugin_metric_table(est).table
        n = len(cloud)
        out = []
        for i, j in req.pairs:
            if not (0 <= i < n and 0 <= j < n):
                raise InvalidInputError(f"pair ({i}, {j}) out of range for {n} points")
            out.append(wire_float(table[i, j]))
        return MetricPairsResponse(d_hat=out)

    @app.post("/metric/table", response_model=MetricTableResponse)
    def metric_table_route(req: MetricTableRequest) -> MetricTableResponse:
        cloud = _cloud(req.points)
        est = MetricEstimate(cloud, req.epsilon, unwire_float(req.cap))
        table = plugin_metric_table(est).table
        return MetricTableResponse(
            table=[[wire_float(v) for v in row] for row in table]
        )

    @app.post("/sdr", response_model=SdrResponse)
    def sdr_route(req: SdrRequest) -> SdrResponse:
        cloud = _cloud(req.points)
        if (req.table is None) == (req.epsilon is None):
            raise InvalidInputError("provide exactly one of table or epsilon")
        if req.table is not None:
            table = np.asarray(
                [[unwire_float(v) for v in row] for row in req.table], dtype=float
            )
            space = FiniteMetricSpace(cloud, table, intrinsic=True)
        else:
            est = MetricEstimate(cloud, req.epsilon, unwire_float(req.cap))
            space = plugin_metric_table(est)
        result = sdr_delta(space, req.delta)
        resp = SdrResponse(
            value=wire_float(result.value),
            floor=result.floor,
            critical_pair=result.critical_pair,
        )
        if req.include_pairs:
            resp.pair_indices = [tuple(p) for p in result.pair_indices.tolist()]
            resp.pair_radii = [wire_float(v) for v in result.pair_radii]
        return resp

    @app.post("/curvature", response_model=CurvatureResponse)
    def curvature_route(req: CurvatureRequest) -> CurvatureResponse:
        cloud = _cloud(req.points)
        n = len(cloud)
        if req.stride < 1:
            raise InvalidInputError(f"stride must be >= 1, got {req.stride}")
        h = req.h
        if h is None:
            params = ModelParams(req.d, req.k, 1.0, req.f_min, req.f_max)
            h = bandwidth(params, n, req.C)
        t = default_tensor_cap(h, req.k) if req.t is None else req.t
        cfg = PatchConfig(req.d, req.k, h, t)
        patches = [fit_patch(cloud, i, cfg) for i in range(0, n, req.stride)]
        est = min_curvature_radius(patches, req.grid)
        return CurvatureResponse(
            R_ell_hat=wire_float(est.R_ell_hat),
            flat=est.flat,
            arg_patch=None if est.arg is None else est.arg[0],
            arg_offset=None if est.arg is None else est.arg[1].tolist(),
            patches=[
                PatchSummary(
                    patch=idx,
                    base_index=p.base_index,
                    min_radius=wire_float(est.per_patch_minima[idx]),
                    objective=p.objective,
                    n_window=p.n_window,
                )
                for idx, p in enumerate(patches)
            ],
            h=h,
            t=t,
        )

    @app.post("/reach", response_model=ReachResponse)
    def reach_route(req: ReachRequest) -> ReachResponse:
        cloud = _cloud(req.points)
        params = ModelParams(
            req.params.d, req.params.k, req.params.rch_min, req.params.f_min, req.params.f_max
        )
        cfg = ReachConfig(
            delta=req.delta,
            epsilon_n=req.epsilon_n,
            adaptive=req.adaptive,
            h=req.h,
            t=req.t,
            grid=req.grid,
            stride=req.stride,
            C=req.C,
        )
        report = reach_estimate(cloud, params, cfg)
        return ReachResponse(
            rch_hat=wire_float(report.rch_hat),
            r_ell_hat=wire_float(report.r_ell_hat),
            sdr_hat=wire_float(report.sdr_hat),
            regime=report.regime,
            tuning=report.tuning,
        )

    @app.post("/bench", response_model=BenchResponse)
    def bench_route(req: BenchRequest) -> BenchResponse:
        cfg = ExperimentConfig(
            shape_kind=req.shape,
            shape_params=req.params,
            estimator=req.estimator,
            n_grid=tuple(req.n_grid),
            replicates=req.replicates,
            seed=req.seed,
            knobs=req.knobs,
            timing=req.timing,
        )
        rows = run_experiment(cfg)
        return BenchResponse(rows=[_row_to_model(r) for r in rows])

    @app.post("/fit-rate", response_model=FitRateResponse)
    def fit_rate_route(req: FitRateRequest) -> FitRateResponse:
        fit = fit_rate([_row_from_model(m) for m in req.rows])
        return FitRateResponse(
            slope=fit.slope,
            intercept=wire_float(fit.intercept),
            n_values=list(fit.n_values),
            medians=list(fit.medians),
            iqr_low=list(fit.iqr_low),
            iqr_high=list(fit.iqr_high),
            ci=fit.ci,
            flat=fit.flat,
        )

    return app


app = create_app()
