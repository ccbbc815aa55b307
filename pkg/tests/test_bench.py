import math

import numpy as np
import pytest

from reachkit.bench import (
    BenchRow,
    ExperimentConfig,
    RateFit,
    fit_rate,
    read_rows,
    rows_to_csv,
    run_experiment,
    write_rows,
    write_svg_plot,
)
from reachkit.errors import InvalidInputError


def _metric_cfg(**kw):
    base = dict(
        shape_kind="circle",
        shape_params={"R": 1.0},
        estimator="metric",
        n_grid=(40, 80),
        replicates=2,
        seed=5,
        knobs={"epsilon": 0.35},
    )
    base.update(kw)
    return ExperimentConfig(**base)


def test_config_validation():
    with pytest.raises(InvalidInputError):
        _metric_cfg(estimator="magic")
    with pytest.raises(InvalidInputError):
        _metric_cfg(n_grid=(80, 40))
    with pytest.raises(InvalidInputError):
        _metric_cfg(n_grid=())
    with pytest.raises(InvalidInputError):
        _metric_cfg(replicates=0)


def test_run_experiment_metric():
    rows = run_experiment(_metric_cfg())
    assert len(rows) == 4
    assert [r.n for r in rows] == [40, 40, 80, 80]
    for r in rows:
        assert r.status == "ok"
        assert r.estimator == "metric"
        assert r.truth == 0.0
        assert r.value >= 0.0
        assert r.abs_err == r.value
        assert r.runtime_ms == 0.0  # timing off by default
    # replicate seeds differ within one n
    assert rows[0].seed != rows[1].seed


def test_run_experiment_deterministic():
    a = run_experiment(_metric_cfg())
    b = run_experiment(_metric_cfg())
    assert rows_to_csv(a) == rows_to_csv(b)


def test_run_experiment_workers_match_serial():
    cfg = _metric_cfg()
    serial = run_experiment(cfg, workers=1)
    parallel = run_experiment(cfg, workers=2)
    assert rows_to_csv(serial) == rows_to_csv(parallel)
    with pytest.raises(InvalidInputError):
        run_experiment(cfg, workers=0)


def test_run_experiment_timing_flag():
    rows = run_experiment(_metric_cfg(timing=True, n_grid=(40,), replicates=1))
    assert rows[0].runtime_ms > 0.0


def test_sdr_rows_record_truth():
    cfg = ExperimentConfig(
        shape_kind="circle",
        shape_params={"R": 1.0},
        estimator="sdr",
        n_grid=(200,),
        replicates=2,
        seed=9,
        knobs={"epsilon": 0.1, "delta": 0.4},
    )
    rows = run_experiment(cfg)
    for r in rows:
        assert r.status == "ok"
        assert r.truth == 1.0  # weak feature size of the unit circle
        assert r.abs_err == pytest.approx(abs(r.value - 1.0))
        assert r.rel_err == pytest.approx(r.abs_err)


def test_invalid_knobs_become_failed_rows():
    # delta at rch_min is rejected by the estimator; rows must record the
    # failure rather than abort the sweep
    cfg = ExperimentConfig(
        shape_kind="circle",
        shape_params={"R": 1.0},
        estimator="sdr",
        n_grid=(100,),
        replicates=2,
        seed=9,
        knobs={"epsilon": 0.1, "delta": 0.5},
    )
    rows = run_experiment(cfg)
    for r in rows:
        assert r.status == "invalid-input"
        assert math.isnan(r.value)
        assert math.isnan(r.abs_err)


def test_csv_round_trip(tmp_path):
    rows = run_experiment(_metric_cfg())
    path = str(tmp_path / "rows.csv")
    write_rows(path, rows)
    back = read_rows(path)
    # nan fields defeat dataclass equality; the canonical text is the contract
    assert rows_to_csv(back) == rows_to_csv(rows)


def test_csv_requires_version_line(tmp_text):
    with pytest.raises(InvalidInputError):
        read_rows(tmp_text("bad.csv", "n,seed\n1,2\n"))


def _rate_rows(c=1.0, slope=-1.0):
    rows = []
    for n in (100, 200, 400, 800):
        for rep in range(3):
            err = c * float(n) ** slope
            rows.append(
                BenchRow(
                    n=n,
                    seed=rep,
                    estimator="metric",
                    value=err,
                    truth=0.0,
                    abs_err=err,
                    rel_err=math.nan,
                    runtime_ms=0.0,
                    status="ok",
                )
            )
    return rows


def test_fit_rate_exact_power_law():
    fit = fit_rate(_rate_rows(slope=-1.0))
    assert fit.slope == pytest.approx(-1.0, abs=1e-12)
    assert not fit.flat
    assert fit.n_values == (100, 200, 400, 800)
    assert fit.ci[0] <= fit.slope <= fit.ci[1]
    np.testing.assert_allclose(fit.medians, [0.01, 0.005, 0.0025, 0.00125])


def test_fit_rate_needs_three_sizes():
    rows = [r for r in _rate_rows() if r.n in (100, 200)]
    with pytest.raises(InvalidInputError):
        fit_rate(rows)


def test_fit_rate_flat_errors():
    rows = [
        BenchRow(n, 0, "metric", 0.0, 0.0, 0.0, math.nan, 0.0, "ok")
        for n in (100, 200, 400)
    ]
    fit = fit_rate(rows)
    assert fit.flat
    assert fit.slope == 0.0


def test_fit_rate_skips_failed_rows():
    rows = _rate_rows()
    rows.append(
        BenchRow(1600, 0, "metric", math.nan, math.nan, math.nan, math.nan, 0.0, "numeric")
    )
    fit = fit_rate(rows)
    assert fit.n_values == (100, 200, 400, 800)


def test_write_svg(tmp_path):
    fit = fit_rate(_rate_rows())
    path = str(tmp_path / "rate.svg")
    write_svg_plot(path, fit)
    text = open(path).read()
    assert "<svg" in text and "polyline" in text
