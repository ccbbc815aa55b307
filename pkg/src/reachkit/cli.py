"""Command-line interface.

Subcommands: sample, estimate-metric, sdr, curvature, reach, bench,
fit-rate, serve. Options may come from a flat key=value file via
--config; explicit flags override it. With --server URL the heavy
computation is delegated to a running service and the CLI acts as a thin
client producing identical files; without it everything runs in process.

Exit codes: 0 on success, 2 on invalid input, 3 on numeric failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .bench import (
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
from .errors import InvalidInputError, ReachkitError, error_slug, exit_code_for
from .geometry import FiniteMetricSpace, ModelParams, PointCloud
from .io import (
    format_float,
    read_cloud_csv,
    read_metric_csv,
    unwire_float,
    wire_float,
    write_cloud_csv,
)
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

__all__ = ["main"]


# ---------------------------------------------------------------------------
# Option plumbing: every option is declared once, parsed as text from either
# the command line or the --config file, and converted by kind.

class Opt:
    def __init__(self, name, kind, default=None, required=False, help=""):
        self.name = name
        self.kind = kind
        self.default = default
        self.required = required
        self.help = help

    @property
    def dest(self) -> str:
        return self.name.replace("-", "_")


def _parse_params(raw: str) -> dict:
    out: dict = {}
    raw = raw.strip()
    if not raw:
        return out
    for item in raw.split(","):
        if "=" not in item:
            raise InvalidInputError(f"expected key=value, got {item!r}")
        key, value = item.split("=", 1)
        key, value = key.strip(), value.strip()
        try:
            out[key] = float(value)
        except ValueError:
            out[key] = value
    return out


def _convert(opt: Opt, raw: str):
    try:
        if opt.kind == "str":
            return raw
        if opt.kind == "int":
            return int(raw)
        if opt.kind == "float":
            return float(raw)
        if opt.kind == "floatauto":
            return None if raw == "auto" else float(raw)
        if opt.kind == "flag":
            return raw.lower() in ("1", "true", "yes", "on")
        if opt.kind == "params":
            return _parse_params(raw)
        if opt.kind == "intlist":
            return tuple(int(x) for x in raw.split(",") if x.strip())
    except ValueError as exc:
        raise InvalidInputError(f"--{opt.name}: cannot parse {raw!r}") from exc
    raise InvalidInputError(f"unknown option kind {opt.kind!r}")


def _read_config(path: str) -> dict:
    out = {}
    for ln in Path(path).read_text(encoding="utf-8").splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        if "=" not in ln:
            raise InvalidInputError(f"{path}: expected key=value line, got {ln!r}")
        key, value = ln.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def _resolve(ns: argparse.Namespace, config: dict, opts: list[Opt]) -> dict:
    values = {}
    for opt in opts:
        raw = getattr(ns, opt.dest, None)
        if raw is None:
            raw = config.get(opt.name)
        if raw is None:
            if opt.required:
                raise InvalidInputError(f"missing required option --{opt.name}")
            values[opt.dest] = opt.default
        else:
            values[opt.dest] = _convert(opt, raw)
    return values


_COMMANDS: dict[str, list[Opt]] = {
    "sample": [
        Opt("shape", "str", required=True, help="shape name (see docs)"),
        Opt("params", "params", default={}, help="shape parameters k=v,..."),
        Opt("n", "int", required=True, help="number of points"),
        Opt("seed", "int", default=0),
        Opt("out", "str", required=True, help="output cloud CSV"),
    ],
    "estimate-metric": [
        Opt("cloud", "str", required=True, help="input cloud CSV"),
        Opt("epsilon", "float", required=True, help="offset radius"),
        Opt("pairs", "str", help="CSV of i,j index pairs (default: all)"),
        Opt("cap", "floatauto", default=None, help="distance cap, or auto"),
        Opt("truth", "str", help="oracle metric CSV for comparison columns"),
        Opt("out", "str", required=True, help="output pair CSV"),
    ],
    "sdr": [
        Opt("cloud", "str", required=True),
        Opt("metric", "str", required=True, help="metric CSV file, or graph:EPS"),
        Opt("delta", "float", required=True, help="separation scale"),
        Opt("dump-pairs", "flag", default=False, help="append per-pair radii"),
        Opt("out", "str", help="output CSV (default: stdout summary only)"),
    ],
    "curvature": [
        Opt("cloud", "str", required=True),
        Opt("d", "int", required=True, help="plane dimension"),
        Opt("k", "int", required=True, help="expansion order"),
        Opt("h", "floatauto", default=None, help="bandwidth, or auto"),
        Opt("t", "floatauto", default=None, help="tensor cap, or auto"),
        Opt("grid", "int", default=9),
        Opt("stride", "int", default=1),
        Opt("fmin", "float", default=1e-6, help="density lower bound for auto h"),
        Opt("fmax", "float", default=1.0, help="density upper bound for auto h"),
        Opt("bw-const", "float", default=1.0, help="bandwidth constant for auto h"),
        Opt("out", "str", help="output per-patch CSV"),
    ],
    "reach": [
        Opt("cloud", "str", required=True),
        Opt("d", "int", required=True),
        Opt("k", "int", required=True),
        Opt("rch-min", "float", required=True),
        Opt("fmin", "float", required=True),
        Opt("fmax", "float", required=True),
        Opt("delta", "str", help="separation scale, or adaptive (default rch_min/2)"),
        Opt("epsilon", "str", help="graph offset, or adaptive (default adaptive)"),
        Opt("h", "floatauto", default=None),
        Opt("t", "floatauto", default=None),
        Opt("grid", "int", default=9),
        Opt("stride", "int", default=1),
        Opt("out", "str", help="output JSON (report always printed)"),
    ],
    "bench": [
        Opt("shape", "str", required=True),
        Opt("params", "params", default={}),
        Opt("estimator", "str", required=True, help="metric|sdr|curvature|reach"),
        Opt("n-grid", "intlist", required=True, help="sample sizes, comma separated"),
        Opt("replicates", "int", default=1),
        Opt("seed", "int", default=0),
        Opt("knobs", "params", default={}, help="estimator knobs k=v,..."),
        Opt("timing", "flag", default=False, help="fill runtime_ms (breaks rerun determinism)"),
        Opt("out", "str", help="output rows CSV (default stdout)"),
    ],
    "fit-rate": [
        Opt("rows", "str", required=True, help="rows CSV from bench"),
        Opt("svg", "str", help="optional SVG plot path"),
        Opt("out", "str", help="output JSON (default stdout)"),
    ],
    "serve": [
        Opt("host", "str", default="127.0.0.1"),
        Opt("port", "int", default=8000),
    ],
}


# ---------------------------------------------------------------------------
# Shared emission helpers (used by both local and client paths).

def _emit_metric(table: np.ndarray, pairs, truth, out: str) -> str:
    has_truth = truth is not None
    header = "i,j,d_hat,d_oracle,rel_err" if has_truth else "i,j,d_hat"
    lines = [header]
    worst = 0.0
    for i, j in pairs:
        d_hat = float(table[i, j])
        if has_truth:
            d_true = float(truth[i, j])
            rel = abs(1.0 - d_hat / d_true) if d_true > 0 else math.nan
            if not math.isnan(rel):
                worst = max(worst, rel)
            lines.append(
                f"{i},{j},{format_float(d_hat)},{format_float(d_true)},{format_float(rel)}"
            )
        else:
            lines.append(f"{i},{j},{format_float(d_hat)}")
    Path(out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    msg = f"wrote {len(pairs)} pairs to {out}"
    if has_truth:
        msg += f"; max rel_err = {format_float(worst)}"
    return msg


def _emit_sdr(value, floor, critical, pair_rows, out, dump) -> str:
    ci = "" if critical is None else str(critical[0])
    cj = "" if critical is None else str(critical[1])
    if out is not None:
        lines = ["value,floor,critical_i,critical_j"]
        lines.append(f"{format_float(value)},{format_float(floor)},{ci},{cj}")
        if dump:
            lines.append("# pair radii")
            lines.append("i,j,radius")
            for i, j, r in pair_rows:
                lines.append(f"{i},{j},{format_float(r)}")
        Path(out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    pair_note = "" if critical is None else f" (critical pair {ci},{cj})"
    return f"sdr_delta = {format_float(value)}{pair_note}"


def _emit_curvature(r_ell, flat, patch_rows, out) -> str:
    if out is not None:
        lines = [f"# R_ell_hat={format_float(r_ell)}"]
        lines.append("patch,base_index,min_radius,objective,n_window")
        for idx, base, radius, objective, n_window in patch_rows:
            lines.append(
                f"{idx},{base},{format_float(radius)},{format_float(objective)},{n_window}"
            )
        Path(out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    note = " (flat)" if flat else ""
    return f"R_ell_hat = {format_float(r_ell)}{note}"


def _emit_reach(report_dict: dict, out) -> str:
    text = json.dumps(report_dict, indent=2)
    if out is not None:
        Path(out).write_text(text + "\n", encoding="utf-8")
    return text


def _rate_fit_json(fit: RateFit) -> dict:
    return {
        "slope": fit.slope,
        "intercept": wire_float(fit.intercept),
        "ci": list(fit.ci),
        "n_values": list(fit.n_values),
        "medians": list(fit.medians),
        "iqr_low": list(fit.iqr_low),
        "iqr_high": list(fit.iqr_high),
        "flat": fit.flat,
    }


def _read_pairs_file(path: str, n: int) -> list[tuple[int, int]]:
    pairs = []
    for ln in Path(path).read_text(encoding="utf-8").splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#") or ln.lower().startswith("i,"):
            continue
        parts = ln.split(",")
        if len(parts) < 2:
            raise InvalidInputError(f"{path}: expected i,j rows, got {ln!r}")
        i, j = int(parts[0]), int(parts[1])
        if not (0 <= i < n and 0 <= j < n):
            raise InvalidInputError(f"{path}: pair ({i}, {j}) out of range for {n} points")
        pairs.append((i, j))
    if not pairs:
        raise InvalidInputError(f"{path}: no pairs")
    return pairs


def _all_pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


# ---------------------------------------------------------------------------
# Local handlers.

def _local_sample(o: dict) -> str:
    shape = make_shape(o["shape"], **o["params"])
    cloud = sample(shape, o["n"], o["seed"])
    write_cloud_csv(o["out"], cloud)
    return f"wrote {len(cloud)} points of dim {cloud.dim} to {o['out']}"


def _metric_truth(o: dict, n: int):
    if o["truth"] is None:
        return None
    truth = read_metric_csv(o["truth"])
    if truth.shape != (n, n):
        raise InvalidInputError(
            f"truth table is {truth.shape}, cloud has {n} points"
        )
    return truth


def _local_estimate_metric(o: dict) -> str:
    cloud = read_cloud_csv(o["cloud"])
    cap = math.inf if o["cap"] is None else o["cap"]
    est = MetricEstimate(cloud, o["epsilon"], cap)
    table = plugin_metric_table(est).table
    n = len(cloud)
    pairs = _read_pairs_file(o["pairs"], n) if o["pairs"] else _all_pairs(n)
    return _emit_metric(table, pairs, _metric_truth(o, n), o["out"])


def _sdr_space(cloud: PointCloud, metric: str) -> FiniteMetricSpace:
    if metric.startswith("graph:"):
        eps = float(metric[len("graph:"):])
        return plugin_metric_table(MetricEstimate(cloud, eps))
    table = read_metric_csv(metric)
    return FiniteMetricSpace(cloud, table, intrinsic=True)


def _local_sdr(o: dict) -> str:
    cloud = read_cloud_csv(o["cloud"])
    result = sdr_delta(_sdr_space(cloud, o["metric"]), o["delta"])
    pair_rows = [
        (int(i), int(j), float(r))
        for (i, j), r in zip(result.pair_indices, result.pair_radii)
    ]
    return _emit_sdr(
        result.value, result.floor, result.critical_pair, pair_rows, o["out"], o["dump_pairs"]
    )


def _local_curvature(o: dict) -> str:
    cloud = read_cloud_csv(o["cloud"])
    n = len(cloud)
    h = o["h"]
    if h is None:
        params = ModelParams(o["d"], o["k"], 1.0, o["fmin"], o["fmax"])
        h = bandwidth(params, n, o["bw_const"])
    t = default_tensor_cap(h, o["k"]) if o["t"] is None else o["t"]
    if o["stride"] < 1:
        raise InvalidInputError(f"stride must be >= 1, got {o['stride']}")
    cfg = PatchConfig(o["d"], o["k"], h, t)
    patches = [fit_patch(cloud, i, cfg) for i in range(0, n, o["stride"])]
    est = min_curvature_radius(patches, o["grid"])
    patch_rows = [
        (idx, p.base_index, float(est.per_patch_minima[idx]), p.objective, p.n_window)
        for idx, p in enumerate(patches)
    ]
    return _emit_curvature(est.R_ell_hat, est.flat, patch_rows, o["out"])


def _reach_cfg(o: dict) -> ReachConfig:
    adaptive = o["delta"] == "adaptive" or o["epsilon"] == "adaptive"
    delta = None if o["delta"] in (None, "adaptive") else float(o["delta"])
    epsilon = None if o["epsilon"] in (None, "adaptive") else float(o["epsilon"])
    return ReachConfig(
        delta=delta,
        epsilon_n=epsilon,
        adaptive=adaptive,
        h=o["h"],
        t=o["t"],
        grid=o["grid"],
        stride=o["stride"],
    )


def _local_reach(o: dict) -> str:
    cloud = read_cloud_csv(o["cloud"])
    params = ModelParams(o["d"], o["k"], o["rch_min"], o["fmin"], o["fmax"])
    report = reach_estimate(cloud, params, _reach_cfg(o))
    payload = {
        "rch_hat": wire_float(report.rch_hat),
        "r_ell_hat": wire_float(report.r_ell_hat),
        "sdr_hat": wire_float(report.sdr_hat),
        "regime": report.regime,
        "tuning": report.tuning,
    }
    return _emit_reach(payload, o["out"])


def _bench_config(o: dict) -> ExperimentConfig:
    return ExperimentConfig(
        shape_kind=o["shape"],
        shape_params=o["params"],
        estimator=o["estimator"],
        n_grid=o["n_grid"],
        replicates=o["replicates"],
        seed=o["seed"],
        knobs=o["knobs"],
        timing=o["timing"],
        output=o["out"],
    )


def _summarize_rows(rows, out) -> str:
    ok = sum(1 for r in rows if r.status == "ok")
    where = out if out is not None else "stdout"
    return f"{len(rows)} rows ({ok} ok) -> {where}"


def _local_bench(o: dict) -> str:
    rows = run_experiment(_bench_config(o))
    if o["out"] is None:
        sys.stdout.write(rows_to_csv(rows))
    return _summarize_rows(rows, o["out"])


def _local_fit_rate(o: dict) -> str:
    fit = fit_rate(read_rows(o["rows"]))
    if o["svg"] is not None:
        write_svg_plot(o["svg"], fit)
    text = json.dumps(_rate_fit_json(fit), indent=2)
    if o["out"] is not None:
        Path(o["out"]).write_text(text + "\n", encoding="utf-8")
    return text


def _local_serve(o: dict) -> str:
    try:
        import uvicorn
    except ImportError as exc:
        raise InvalidInputError(
            "serve requires uvicorn; install the 'serve' extra"
        ) from exc
    from .service import app

    uvicorn.run(app, host=o["host"], port=o["port"])
    return "server stopped"


# ---------------------------------------------------------------------------
# Client handlers: same inputs and outputs, computation on the server.

def _post(server: str, path: str, payload: dict) -> dict:
    import httpx

    url = server.rstrip("/") + path
    resp = httpx.post(url, json=payload, timeout=600.0)
    if resp.status_code != 200:
        try:
            body = resp.json()
        except ValueError:
            body = {"detail": resp.text}
        detail = body.get("detail", "request failed")
        kind = body.get("kind", "error")
        if resp.status_code == 422:
            raise InvalidInputError(f"server: {detail}")
        if kind in ("numeric", "ill-conditioned"):
            from .errors import NumericError

            raise NumericError(f"server: {detail}")
        raise ReachkitError(f"server ({resp.status_code}): {detail}")
    return resp.json()


def _client_sample(o: dict, server: str) -> str:
    body = _post(
        server,
        "/sample",
        {"shape": o["shape"], "params": o["params"], "n": o["n"], "seed": o["seed"]},
    )
    cloud = PointCloud(np.asarray(body["points"], dtype=float))
    write_cloud_csv(o["out"], cloud)
    return f"wrote {len(cloud)} points of dim {cloud.dim} to {o['out']}"


def _client_estimate_metric(o: dict, server: str) -> str:
    cloud = read_cloud_csv(o["cloud"])
    n = len(cloud)
    body = _post(
        server,
        "/metric/table",
        {
            "points": cloud.points.tolist(),
            "epsilon": o["epsilon"],
            "cap": o["cap"],
        },
    )
    table = np.asarray(
        [[unwire_float(v) for v in row] for row in body["table"]], dtype=float
    )
    pairs = _read_pairs_file(o["pairs"], n) if o["pairs"] else _all_pairs(n)
    return _emit_metric(table, pairs, _metric_truth(o, n), o["out"])


def _client_sdr(o: dict, server: str) -> str:
    cloud = read_cloud_csv(o["cloud"])
    payload: dict = {
        "points": cloud.points.tolist(),
        "delta": o["delta"],
        "include_pairs": bool(o["dump_pairs"]),
    }
    metric = o["metric"]
    if metric.startswith("graph:"):
        payload["epsilon"] = float(metric[len("graph:"):])
    else:
        table = read_metric_csv(metric)
        payload["table"] = [[wire_float(v) for v in row] for row in table]
    body = _post(server, "/sdr", payload)
    value = unwire_float(body["value"])
    critical = None if body["critical_pair"] is None else tuple(body["critical_pair"])
    pair_rows = []
    if o["dump_pairs"] and body.get("pair_indices") is not None:
        pair_rows = [
            (int(i), int(j), unwire_float(r))
            for (i, j), r in zip(body["pair_indices"], body["pair_radii"])
        ]
    return _emit_sdr(value, body["floor"], critical, pair_rows, o["out"], o["dump_pairs"])


def _client_curvature(o: dict, server: str) -> str:
    cloud = read_cloud_csv(o["cloud"])
    body = _post(
        server,
        "/curvature",
        {
            "points": cloud.points.tolist(),
            "d": o["d"],
            "k": o["k"],
            "h": o["h"],
            "t": o["t"],
            "grid": o["grid"],
            "stride": o["stride"],
            "f_min": o["fmin"],
            "f_max": o["fmax"],
            "C": o["bw_const"],
        },
    )
    patch_rows = [
        (p["patch"], p["base_index"], unwire_float(p["min_radius"]), p["objective"], p["n_window"])
        for p in body["patches"]
    ]
    return _emit_curvature(unwire_float(body["R_ell_hat"]), body["flat"], patch_rows, o["out"])


def _client_reach(o: dict, server: str) -> str:
    cloud = read_cloud_csv(o["cloud"])
    cfg = _reach_cfg(o)
    body = _post(
        server,
        "/reach",
        {
            "points": cloud.points.tolist(),
            "params": {
                "d": o["d"],
                "k": o["k"],
                "rch_min": o["rch_min"],
                "f_min": o["fmin"],
                "f_max": o["fmax"],
            },
            "delta": cfg.delta,
            "epsilon_n": cfg.epsilon_n,
            "adaptive": cfg.adaptive,
            "h": cfg.h,
            "t": cfg.t,
            "grid": cfg.grid,
            "stride": cfg.stride,
        },
    )
    return _emit_reach(body, o["out"])


def _client_bench(o: dict, server: str) -> str:
    body = _post(
        server,
        "/bench",
        {
            "shape": o["shape"],
            "params": o["params"],
            "estimator": o["estimator"],
            "n_grid": list(o["n_grid"]),
            "replicates": o["replicates"],
            "seed": o["seed"],
            "knobs": o["knobs"],
            "timing": o["timing"],
        },
    )
    rows = [_row_from_wire(m) for m in body["rows"]]
    if o["out"] is not None:
        write_rows(o["out"], rows)
    else:
        sys.stdout.write(rows_to_csv(rows))
    return _summarize_rows(rows, o["out"])


def _row_from_wire(m: dict) -> BenchRow:
    missing = math.inf if m["status"] == "ok" else math.nan
    return BenchRow(
        n=m["n"],
        seed=m["seed"],
        estimator=m["estimator"],
        value=unwire_float(m["value"], missing=missing),
        truth=unwire_float(m["truth"], missing=missing),
        abs_err=unwire_float(m["abs_err"], missing=missing),
        rel_err=unwire_float(m["rel_err"], missing=math.nan),
        runtime_ms=m["runtime_ms"],
        status=m["status"],
    )


def _row_to_wire(r: BenchRow) -> dict:
    return {
        "n": r.n,
        "seed": r.seed,
        "estimator": r.estimator,
        "value": wire_float(r.value),
        "truth": wire_float(r.truth),
        "abs_err": wire_float(r.abs_err),
        "rel_err": wire_float(r.rel_err),
        "runtime_ms": r.runtime_ms,
        "status": r.status,
    }


def _client_fit_rate(o: dict, server: str) -> str:
    rows = read_rows(o["rows"])
    body = _post(server, "/fit-rate", {"rows": [_row_to_wire(r) for r in rows]})
    fit = RateFit(
        slope=body["slope"],
        intercept=unwire_float(body["intercept"], missing=math.nan),
        n_values=tuple(body["n_values"]),
        medians=tuple(body["medians"]),
        iqr_low=tuple(body["iqr_low"]),
        iqr_high=tuple(body["iqr_high"]),
        ci=tuple(body["ci"]),
        flat=body["flat"],
    )
    if o["svg"] is not None:
        write_svg_plot(o["svg"], fit)
    text = json.dumps(_rate_fit_json(fit), indent=2)
    if o["out"] is not None:
        Path(o["out"]).write_text(text + "\n", encoding="utf-8")
    return text


_LOCAL = {
    "sample": _local_sample,
    "estimate-metric": _local_estimate_metric,
    "sdr": _local_sdr,
    "curvature": _local_curvature,
    "reach": _local_reach,
    "bench": _local_bench,
    "fit-rate": _local_fit_rate,
    "serve": _local_serve,
}

_CLIENT = {
    "sample": _client_sample,
    "estimate-metric": _client_estimate_metric,
    "sdr": _client_sdr,
    "curvature": _client_curvature,
    "reach": _client_reach,
    "bench": _client_bench,
    "fit-rate": _client_fit_rate,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reachkit",
        description="Reach, curvature, and metric estimation for point clouds.",
    )
    parser.add_argument("--server", help="base URL of a running service; delegate computation")
    parser.add_argument("--config", help="flat key=value option file; flags override")
    sub = parser.add_subparsers(dest="command", required=True)
    for command, opts in _COMMANDS.items():
        sp = sub.add_parser(command)
        for opt in opts:
            if opt.kind == "flag":
                sp.add_argument(f"--{opt.name}", action="store_const", const="true",
                                default=None, help=opt.help)
            else:
                sp.add_argument(f"--{opt.name}", type=str, default=None, help=opt.help)
    return parser


def main(argv=None) -> int:
    ns = _build_parser().parse_args(argv)
    try:
        config = _read_config(ns.config) if ns.config else {}
        opts = _resolve(ns, config, _COMMANDS[ns.command])
        if ns.server and ns.command != "serve":
            handler = _CLIENT[ns.command]
            message = handler(opts, ns.server)
        else:
            message = _LOCAL[ns.command](opts)
        if message:
            print(message)
        return 0
    except ReachkitError as exc:
        print(f"error ({error_slug(exc)}): {exc}", file=sys.stderr)
        return exit_code_for(exc)
    except OSError as exc:
        print(f"error (io): {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
