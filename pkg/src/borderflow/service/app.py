"""FastAPI application wiring the toolkit to JSON over HTTP.

All routes live under /v1. Simulation endpoints are pure functions of
the request body; forecasting state (panel, trained runs) lives in the
data directory, and training holds an exclusive slot so two concurrent
train requests cannot interleave their artifact writes.
"""

from __future__ import annotations

import math
import threading
import uuid
from datetime import date, timedelta
from pathlib import Path

import numpy as np
from fastapi import APIRouter, FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .. import __version__
from ..forecasting.artifacts import load_forecast, save_run
from ..forecasting.bootstrap import BootstrapConfig
from ..forecasting.features import FeatureError, FeatureSpec, build_feature_rows, build_features
from ..forecasting.series import DailySeries, SeriesError, TargetSpec, build_target
from ..forecasting.train import train_ensemble
from ..ingest import (
    OBSERVED,
    IndicatorSeries,
    IngestError,
    Panel,
    load_panel_csv,
    normalize_for_display,
)
from ..pipeline import (
    ContingencyRule,
    ParameterError,
    PipelineState,
    ScenarioParams,
    SimulationTrace,
    Stage,
    StateError,
    bottlenecks,
    evaluate_triggers,
    shelter_overflow,
    simulate,
)
from ..sensitivity import sensitivity_sweep, snapshot_at
from .config import ServiceConfig
from .schemas import (
    RunCreateBody,
    ScenarioCreateBody,
    SensitivityBody,
    SimulateBody,
    TrainBody,
)
from .store import ScenarioDocument, Store, StoreError


def _domain_422(message: str, loc: tuple[str, ...] = ("body",)) -> HTTPException:
    return HTTPException(
        status_code=422,
        detail=[{"loc": list(loc), "msg": message, "type": "domain_error"}],
    )


def _params_from_body(body) -> ScenarioParams:
    return ScenarioParams(
        latent_demand=body.latent_demand,
        arrival_rate=body.arrival_rate,
        registration_capacity=body.registration_capacity,
        special_needs_fraction=body.special_needs_fraction,
        extra_shelter_requests=body.extra_shelter_requests,
        relocation_capacity=body.relocation_capacity,
        shelter_capacity=body.shelter_capacity,
        horizon=body.horizon,
    )


def trace_doc(trace: SimulationTrace) -> dict:
    return {
        "days": list(trace.days),
        "occupancy": {stage.value: trace.series(stage) for stage in Stage},
        "flows": [
            {"day": f.day, "source": f.source.value, "dest": f.dest.value, "amount": f.amount}
            for f in trace.flows
        ],
    }


def _simulate_doc(
    params: ScenarioParams, initial: PipelineState, rules: list[ContingencyRule]
) -> dict:
    try:
        trace = simulate(initial, params)
        overflow = shelter_overflow(trace, params.shelter_capacity)
        necks = bottlenecks(trace)
        triggers = evaluate_triggers(trace, rules)
    except (ParameterError, StateError) as exc:
        raise _domain_422(str(exc))
    return {
        "trace": trace_doc(trace),
        "overflow": None
        if overflow is None
        else {"day": overflow.day, "peak_exceedance": overflow.peak_exceedance},
        "bottlenecks": [
            {"stage": stage.value, "growth_per_day": growth} for stage, growth in necks
        ],
        "triggers": [{"rule_id": rule_id, "day": day} for rule_id, day in triggers],
    }


def _nan_to_none(values) -> list:
    return [None if (isinstance(v, float) and math.isnan(v)) else v for v in values]


def create_app(config: ServiceConfig, frontend_dir: Path | None = None) -> FastAPI:
    app = FastAPI(title="borderflow", version=__version__)
    config.data_dir.mkdir(parents=True, exist_ok=True)
    store = Store(config.data_dir / "store.sqlite")
    store.seed_default_scenario()
    app.state.config = config
    app.state.store = store
    app.state.training_lock = threading.Lock()

    @app.exception_handler(RequestValidationError)
    async def _validation_handler(request: Request, exc: RequestValidationError):
        errors = exc.errors()
        # a body that is not valid JSON is a malformed request, not a
        # validation failure of a well-formed one
        status = 400 if any(e.get("type") == "json_invalid" for e in errors) else 422
        detail = [
            {"loc": list(e.get("loc", [])), "msg": str(e.get("msg", "")), "type": e.get("type", "")}
            for e in errors
        ]
        return JSONResponse(status_code=status, content={"detail": detail})

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok", "version": __version__}

    v1 = APIRouter(prefix="/v1")

    @v1.post("/simulate")
    def post_simulate(body: SimulateBody) -> dict:
        params = _params_from_body(body.params)
        initial = PipelineState.from_names(body.initial)
        rules = [
            ContingencyRule(
                rule_id=r.rule_id,
                metric=Stage(r.metric),
                threshold=r.threshold,
                label=r.label,
            )
            for r in body.rules
        ]
        return _simulate_doc(params, initial, rules)

    @v1.post("/sensitivity")
    def post_sensitivity(body: SensitivityBody) -> dict:
        params = _params_from_body(body.base)
        if body.snapshot_day > params.horizon:
            raise _domain_422(
                f"snapshot_day {body.snapshot_day} beyond horizon {params.horizon}",
                ("body", "snapshot_day"),
            )
        initial = PipelineState.from_names(body.initial)
        try:
            sweep = sensitivity_sweep(params, body.param, body.grid, initial)
            snapshot = snapshot_at(sweep, body.snapshot_day)
        except (ParameterError, StateError) as exc:
            raise _domain_422(str(exc), ("body", "param"))
        return {
            "param": body.param,
            "series": [
                {"value": value, "sheltered": series} for value, series in sweep.items()
            ],
            "snapshot": {
                "day": body.snapshot_day,
                "points": [
                    {"value": value, "sheltered": occ} for value, occ in snapshot.items()
                ],
            },
        }

    def _load_panel() -> Panel:
        try:
            return load_panel_csv(config.data_dir / "panel.csv")
        except IngestError:
            raise HTTPException(status_code=404, detail="no ingested indicator panel")

    @v1.post("/forecast/train")
    def post_train(body: TrainBody) -> dict:
        if not app.state.training_lock.acquire(blocking=False):
            raise HTTPException(status_code=409, detail="training already in progress")
        try:
            panel = _load_panel()
            columns = body.indicators if body.indicators is not None else list(panel.columns)
            unknown = sorted(set(columns) - set(panel.columns))
            if unknown:
                raise _domain_422(
                    f"panel has no columns: {', '.join(unknown)}", ("body", "indicators")
                )
            indicators = {
                c: panel.column_series(c).to_daily_series() for c in columns
            }
            arrivals = DailySeries(
                name=body.arrivals.name,
                start=body.arrivals.start,
                values=np.array(body.arrivals.values, dtype=float),
            )
            tspec = TargetSpec(window=body.target.window, horizon=body.target.horizon)
            fspec = FeatureSpec(
                target_lags=tuple(body.lags), indicators=tuple(sorted(columns))
            )
            bcfg = BootstrapConfig(
                replicates=body.bootstrap.replicates,
                level=body.bootstrap.level,
                seed=body.bootstrap.seed,
            )
            try:
                target = build_target(arrivals, tspec)
                matrix = build_features(target, indicators, fspec, tspec)
                future_rows = None
                if body.future_days > 0:
                    future_dates = [
                        matrix.dates[-1] + timedelta(days=i)
                        for i in range(1, body.future_days + 1)
                    ]
                    future_rows = build_feature_rows(
                        target, indicators, fspec, tspec, future_dates
                    )
                result = train_ensemble(
                    matrix,
                    n_test=body.n_test,
                    bootstrap=bcfg,
                    seed=body.seed,
                    future_rows=future_rows,
                )
            except (SeriesError, FeatureError, ValueError) as exc:
                raise _domain_422(str(exc))
            run_id = uuid.uuid4().hex
            run_dir = config.data_dir / "runs" / run_id
            save_run(run_dir, result)
            (config.data_dir / "latest").write_text(run_id, encoding="utf-8")
            return {
                "run_id": run_id,
                "metrics": [
                    {
                        "model": row.model,
                        "cv_mse": row.cv_mse,
                        "test_rmse": row.test_rmse,
                        "test_mae": row.test_mae,
                        "weight": row.weight,
                    }
                    for row in result.metrics
                ],
                "weights": result.weights,
            }
        finally:
            app.state.training_lock.release()

    @v1.get("/forecast/latest")
    def get_latest() -> dict:
        pointer = config.data_dir / "latest"
        if not pointer.exists():
            raise HTTPException(status_code=404, detail="no trained ensemble")
        run_id = pointer.read_text(encoding="utf-8").strip()
        run_dir = config.data_dir / "runs" / run_id
        try:
            forecast = load_forecast(run_dir)
        except ValueError:
            raise HTTPException(status_code=404, detail="no trained ensemble")
        return {
            "run_id": run_id,
            "dates": [d.isoformat() for d in forecast.dates],
            "truth": _nan_to_none([float(v) for v in forecast.truth]),
            "per_model": {
                k: [float(v) for v in vals] for k, vals in forecast.per_model.items()
            },
            "weights": forecast.weights,
            "point": [float(v) for v in forecast.point],
            "lower": [float(v) for v in forecast.lower],
            "upper": [float(v) for v in forecast.upper],
            "level": forecast.level,
        }

    @v1.get("/indicators")
    def get_indicators(window: str) -> dict:
        try:
            start_text, end_text = window.split(":", 1)
            start = date.fromisoformat(start_text)
            end = date.fromisoformat(end_text)
        except ValueError:
            raise _domain_422(
                "window must look like YYYY-MM-DD:YYYY-MM-DD", ("query", "window")
            )
        if end < start:
            raise _domain_422("window end before start", ("query", "window"))
        panel = _load_panel()
        lo = max(start, panel.start)
        hi = min(end, panel.end)
        series_docs = []
        if lo <= hi:
            i0 = (lo - panel.start).days
            i1 = (hi - panel.start).days + 1
            for column in panel.columns:
                col = panel.column_series(column)
                sliced = IndicatorSeries(
                    source_id=col.source_id,
                    start=lo,
                    values=col.values[i0:i1],
                    flags=col.flags[i0:i1],
                    units=col.units,
                )
                flags = np.array(sliced.flags)
                if (flags == OBSERVED).any():
                    norm = normalize_for_display(sliced)
                    values = _nan_to_none([float(v) for v in norm.values])
                    degenerate = norm.degenerate
                else:
                    values = [None] * len(sliced)
                    degenerate = False
                series_docs.append(
                    {
                        "id": column,
                        "start": lo.isoformat(),
                        "values": values,
                        "mask": list(sliced.flags),
                        "degenerate": degenerate,
                    }
                )
        else:
            series_docs = [
                {"id": column, "start": None, "values": [], "mask": [], "degenerate": False}
                for column in panel.columns
            ]
        return {
            "window": {"start": start.isoformat(), "end": end.isoformat()},
            "series": series_docs,
        }

    @v1.get("/scenarios")
    def list_scenarios() -> dict:
        return {"scenarios": [doc.to_doc() for doc in store.list_scenarios()]}

    @v1.post("/scenarios")
    def create_scenario(body: ScenarioCreateBody) -> dict:
        doc = ScenarioDocument(
            scenario_id=body.scenario_id,
            name=body.name,
            params=_params_from_body(body.params),
            initial=PipelineState.from_names(body.initial),
        )
        if body.ranges is not None:
            doc.ranges.update(body.ranges)
        try:
            saved = store.save_scenario(doc)
        except StoreError as exc:
            if "already exists" in str(exc):
                raise HTTPException(status_code=409, detail=str(exc))
            raise _domain_422(str(exc))
        return saved.to_doc()

    @v1.get("/scenarios/{scenario_id}")
    def get_scenario(scenario_id: str) -> dict:
        try:
            return store.get_scenario(scenario_id).to_doc()
        except StoreError as exc:
            raise HTTPException(status_code=404, detail=str(exc))

    @v1.post("/scenarios/{scenario_id}/run")
    def run_scenario(scenario_id: str, body: RunCreateBody) -> dict:
        try:
            doc = store.get_scenario(scenario_id)
        except StoreError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        rules = [
            ContingencyRule(
                rule_id=r.rule_id,
                metric=Stage(r.metric),
                threshold=r.threshold,
                label=r.label,
            )
            for r in body.rules
        ]
        payload = _simulate_doc(doc.params, doc.initial, rules)
        payload["scenario_id"] = scenario_id
        run_id = store.save_run(scenario_id, payload)
        payload["run_id"] = run_id
        return payload

    @v1.get("/runs/{run_id}")
    def get_run(run_id: str) -> dict:
        try:
            return store.get_run(run_id)
        except StoreError as exc:
            raise HTTPException(status_code=404, detail=str(exc))

    app.include_router(v1)

    if frontend_dir is not None and Path(frontend_dir).is_dir():
        app.mount("/", StaticFiles(directory=frontend_dir, html=True), name="ui")

    return app
