"""Command line interface mirroring the HTTP API.

Every subcommand exits 0 on success and 2 on validation failure, with
the reason on stderr. Numerical output goes through the same float
formatting as the JSON API so the two surfaces agree byte for byte.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from datetime import date
from pathlib import Path

import numpy as np

from .forecasting.artifacts import (
    export_forecast_csv,
    load_forecast,
    load_manifest,
    save_run,
)
from .forecasting.bootstrap import BootstrapConfig
from .forecasting.features import FeatureSpec, build_feature_rows, build_features
from .forecasting.series import DailySeries, TargetSpec, build_target
from .forecasting.models import evaluate
from .forecasting.train import train_ensemble
from .ingest import (
    IngestError,
    build_panel,
    export_panel_csv,
    ingest_source,
    load_panel_csv,
    load_source_registry,
)
from .pipeline import ParameterError, bottlenecks, shelter_overflow, simulate
from .scenario_io import (
    ScenarioFormatError,
    export_flows_csv,
    export_occupancy_csv,
    load_scenario,
)
from .sensitivity import sensitivity_sweep, snapshot_at


def _parse_date(text: str) -> date:
    try:
        return date.fromisoformat(text)
    except ValueError:
        raise ParameterError(f"expected YYYY-MM-DD, got {text!r}")


def _parse_grid(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError:
        raise ParameterError(f"grid must be comma-separated numbers, got {text!r}")


def _read_value_csv(path: str | Path, value_column: str | None = None) -> DailySeries:
    """Read a (date, value) file; value column by name or last column."""
    path = Path(path)
    if not path.exists():
        raise IngestError(f"file not found: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        if "date" not in header:
            raise IngestError(f"{path}: no 'date' column in header {header}")
        column = value_column
        if column is None:
            column = "value" if "value" in header else header[-1]
        if column not in header:
            raise IngestError(f"{path}: no {column!r} column in header {header}")
        rows = [(date.fromisoformat(r["date"]), float(r[column])) for r in reader]
    if not rows:
        raise IngestError(f"{path}: no data rows")
    rows.sort()
    start = rows[0][0]
    n = (rows[-1][0] - start).days + 1
    if n != len(rows):
        raise IngestError(f"{path}: dates must be contiguous daily values")
    return DailySeries(name=column, start=start, values=np.array([v for _, v in rows]))


def cmd_ingest(args) -> int:
    sources = load_source_registry(args.sources)
    span = (_parse_date(args.start), _parse_date(args.end))
    series_list = []
    for source in sources:
        series, report = ingest_source(source, span, max_gap=args.max_gap)
        series_list.append(series)
        print(
            f"{report.source_id}: read={report.rows_read} accepted={report.accepted} "
            f"rejected={len(report.rejected)} gaps={report.gap_count} "
            f"longest_gap={report.longest_gap} filled={report.fill_count}"
        )
        for line, reason in report.rejected:
            print(f"  line {line}: {reason}")
    panel = build_panel(series_list, span)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    mask_path = export_panel_csv(panel, out_dir / "panel.csv")
    print(f"panel: {len(panel)} days x {len(panel.columns)} sources -> {out_dir / 'panel.csv'}")
    print(f"mask sidecar -> {mask_path}")
    return 0


def cmd_simulate(args) -> int:
    params, initial = load_scenario(args.scenario)
    trace = simulate(initial, params)
    export_occupancy_csv(trace, args.out)
    if args.flows_out:
        export_flows_csv(trace, args.flows_out)
    overflow = shelter_overflow(trace, params.shelter_capacity)
    summary = {
        "horizon": trace.horizon,
        "overflow": None
        if overflow is None
        else {"day": overflow.day, "peak_exceedance": overflow.peak_exceedance},
        "bottlenecks": [
            {"stage": stage.value, "growth_per_day": growth}
            for stage, growth in bottlenecks(trace)
        ],
    }
    print(json.dumps(summary))
    return 0


def cmd_sweep(args) -> int:
    params, initial = load_scenario(args.scenario)
    grid = _parse_grid(args.grid)
    sweep = sensitivity_sweep(params, args.param, grid, initial)
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["value", "day", "sheltered"])
        for value, series in sweep.items():
            for day, occ in enumerate(series):
                writer.writerow([str(value), day, str(occ)])
    if args.snapshot_day is not None:
        snapshot = snapshot_at(sweep, args.snapshot_day)
        print(
            json.dumps(
                {
                    "day": args.snapshot_day,
                    "points": [{"value": v, "sheltered": s} for v, s in snapshot.items()],
                }
            )
        )
    return 0


def cmd_train(args) -> int:
    panel = load_panel_csv(args.panel)
    arrivals = _read_value_csv(args.arrivals, args.value_column)
    columns = sorted(panel.columns)
    indicators = {c: panel.column_series(c).to_daily_series() for c in columns}
    tspec = TargetSpec(window=args.window, horizon=args.horizon)
    fspec = FeatureSpec(
        target_lags=tuple(int(v) for v in args.lags.split(",")),
        indicators=tuple(columns),
    )
    target = build_target(arrivals, tspec)
    matrix = build_features(target, indicators, fspec, tspec)
    future_rows = None
    if args.future_days > 0:
        from datetime import timedelta

        future_dates = [
            matrix.dates[-1] + timedelta(days=i) for i in range(1, args.future_days + 1)
        ]
        future_rows = build_feature_rows(target, indicators, fspec, tspec, future_dates)
    result = train_ensemble(
        matrix,
        n_test=args.n_test,
        bootstrap=BootstrapConfig(
            replicates=args.replicates, level=args.level, seed=args.seed
        ),
        seed=args.seed,
        future_rows=future_rows,
    )
    run_dir = save_run(args.out_dir, result)
    print(f"{'model':<18} {'cv_mse':>12} {'test_rmse':>12} {'test_mae':>12} {'weight':>8}")
    for row in result.metrics:
        cv = f"{row.cv_mse:.3f}" if row.cv_mse is not None else "-"
        w = f"{row.weight:.4f}" if row.weight is not None else "-"
        print(f"{row.model:<18} {cv:>12} {row.test_rmse:>12.3f} {row.test_mae:>12.3f} {w:>8}")
    print(f"artifacts -> {run_dir}")
    return 0


def cmd_predict(args) -> int:
    manifest = load_manifest(args.run_dir)
    forecast = load_forecast(args.run_dir)
    export_forecast_csv(forecast, args.out)
    print(
        f"{len(forecast.dates)} dates x {len(manifest['models'])} models -> {args.out}"
    )
    return 0


def cmd_evaluate(args) -> int:
    pred = _read_value_csv(args.pred, args.value_column)
    truth = _read_value_csv(args.truth, args.value_column)
    if pred.start != truth.start or len(pred) != len(truth):
        raise ParameterError("prediction and truth files must cover the same dates")
    rmse, mae = evaluate(pred.values, truth.values)
    print(f"rmse={rmse} mae={mae}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service.app import create_app
    from .service.config import load_config

    config = load_config(args.config)
    if args.port is not None:
        config = type(config)(host=config.host, port=args.port, data_dir=config.data_dir)
    if args.data_dir is not None:
        config = type(config)(host=config.host, port=config.port, data_dir=Path(args.data_dir))
    config.validate()
    frontend = Path(args.frontend) if args.frontend else None
    app = create_app(config, frontend_dir=frontend)
    uvicorn.run(app, host=config.host, port=config.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="borderflow",
        description="Border-crossing pipeline simulation and arrivals forecasting",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse indicator files into a daily panel")
    p.add_argument("--sources", required=True, help="TOML source registry")
    p.add_argument("--start", required=True, help="panel start date (YYYY-MM-DD)")
    p.add_argument("--end", required=True, help="panel end date (YYYY-MM-DD)")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--max-gap", type=int, default=None, help="override forward-fill limit")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("simulate", help="run one scenario and export the trace")
    p.add_argument("--scenario", required=True, help="scenario TOML file")
    p.add_argument("--out", required=True, help="occupancy CSV path")
    p.add_argument("--flows-out", default=None, help="optional flow CSV path")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="one-at-a-time sensitivity sweep")
    p.add_argument("--scenario", required=True)
    p.add_argument("--param", required=True)
    p.add_argument("--grid", required=True, help="comma-separated values")
    p.add_argument("--snapshot-day", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("train", help="train the forecast ensemble")
    p.add_argument("--panel", required=True, help="panel CSV from ingest")
    p.add_argument("--arrivals", required=True, help="daily arrivals CSV (date,value)")
    p.add_argument("--value-column", default=None)
    p.add_argument("--out-dir", required=True, help="artifact directory")
    p.add_argument("--lags", default="30,37,44")
    p.add_argument("--window", type=int, default=7)
    p.add_argument("--horizon", type=int, default=30)
    p.add_argument("--n-test", type=int, default=83)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--replicates", type=int, default=1000)
    p.add_argument("--level", type=float, default=0.80)
    p.add_argument("--future-days", type=int, default=0)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="export the forecast table from a run")
    p.add_argument("--run-dir", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evaluate", help="rmse/mae between two value files")
    p.add_argument("--pred", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--value-column", default=None)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--config", default=None, help="service TOML config")
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--data-dir", default=None)
    p.add_argument("--frontend", default=None, help="static UI directory to mount")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
