"""Versioned on-disk artifacts for a training run.

A run directory holds a JSON manifest (hyperparameters, metrics, seed,
training range, weights), one joblib blob per fitted estimator, and
the forecast in both JSON and CSV. Linear-model coefficients are also
inlined in the manifest so a run can be audited without unpickling.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from datetime import date, datetime, timezone
from pathlib import Path

import joblib
import numpy as np

from .ensemble import EnsembleForecast
from .models import TrainedModel
from .train import TrainResult

ARTIFACT_VERSION = 1


class ArtifactError(ValueError):
    """A run directory is missing pieces or has an unsupported layout."""


def _jsonable(values) -> list:
    return [None if (isinstance(v, float) and math.isnan(v)) else float(v) for v in values]


def _coefficients(model: TrainedModel) -> dict | None:
    est = model.estimator
    if hasattr(est, "coef_") and hasattr(est, "intercept_"):
        return {
            "intercept": float(est.intercept_),
            "by_feature": {
                name: float(c) for name, c in zip(model.feature_names, est.coef_)
            },
        }
    if hasattr(est, "mean_"):
        return {"mean": float(est.mean_)}
    return None


def _model_entry(model: TrainedModel, filename: str) -> dict:
    return {
        "kind": model.kind,
        "hyperparams": model.hyperparams,
        "cv_mse": model.cv_mse,
        "test_rmse": model.test_rmse,
        "test_mae": model.test_mae,
        "seed": model.seed,
        "train_range": [model.train_range[0].isoformat(), model.train_range[1].isoformat()],
        "feature_names": list(model.feature_names),
        "file": filename,
        "coefficients": _coefficients(model),
    }


def forecast_to_doc(forecast: EnsembleForecast) -> dict:
    return {
        "dates": [d.isoformat() for d in forecast.dates],
        "truth": _jsonable(forecast.truth),
        "per_model": {k: _jsonable(v) for k, v in forecast.per_model.items()},
        "weights": forecast.weights,
        "point": _jsonable(forecast.point),
        "lower": _jsonable(forecast.lower),
        "upper": _jsonable(forecast.upper),
        "level": forecast.level,
    }


def forecast_from_doc(doc: dict) -> EnsembleForecast:
    to_arr = lambda vals: np.array(
        [np.nan if v is None else float(v) for v in vals], dtype=float
    )
    return EnsembleForecast(
        dates=tuple(date.fromisoformat(d) for d in doc["dates"]),
        per_model={k: to_arr(v) for k, v in doc["per_model"].items()},
        weights={k: float(v) for k, v in doc["weights"].items()},
        point=to_arr(doc["point"]),
        lower=to_arr(doc["lower"]),
        upper=to_arr(doc["upper"]),
        level=float(doc["level"]),
        truth=to_arr(doc["truth"]),
    )


def export_forecast_csv(forecast: EnsembleForecast, path: str | Path) -> None:
    """(date, truth, per-model columns, ensemble point, lower, upper) table."""
    names = sorted(forecast.per_model)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["date", "truth", *names, "ensemble", "lower", "upper"])
        for i, d in enumerate(forecast.dates):
            truth = forecast.truth[i]
            writer.writerow(
                [
                    d.isoformat(),
                    "" if math.isnan(truth) else str(float(truth)),
                    *(str(float(forecast.per_model[n][i])) for n in names),
                    str(float(forecast.point[i])),
                    str(float(forecast.lower[i])),
                    str(float(forecast.upper[i])),
                ]
            )


def save_run(run_dir: str | Path, result: TrainResult) -> Path:
    run_dir = Path(run_dir)
    run_dir.mkdir(parents=True, exist_ok=True)

    entries = []
    for kind, model in result.models.items():
        filename = f"{kind}.joblib"
        joblib.dump(model.estimator, run_dir / filename)
        entries.append(_model_entry(model, filename))
    baseline_file = f"{result.baseline.kind}.joblib"
    joblib.dump(result.baseline.estimator, run_dir / baseline_file)

    manifest = {
        "version": ARTIFACT_VERSION,
        "created": datetime.now(timezone.utc).isoformat(),
        "weight_rule": "inverse_rmse",
        "weights": result.weights,
        "models": entries,
        "baseline": _model_entry(result.baseline, baseline_file),
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
    }
    (run_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2), encoding="utf-8"
    )
    (run_dir / "forecast.json").write_text(
        json.dumps(forecast_to_doc(result.forecast)), encoding="utf-8"
    )
    export_forecast_csv(result.forecast, run_dir / "forecast.csv")
    return run_dir


def load_manifest(run_dir: str | Path) -> dict:
    path = Path(run_dir) / "manifest.json"
    if not path.exists():
        raise ArtifactError(f"no manifest at {path}")
    manifest = json.loads(path.read_text(encoding="utf-8"))
    if manifest.get("version") != ARTIFACT_VERSION:
        raise ArtifactError(
            f"unsupported artifact version {manifest.get('version')!r}"
        )
    return manifest


def load_forecast(run_dir: str | Path) -> EnsembleForecast:
    path = Path(run_dir) / "forecast.json"
    if not path.exists():
        raise ArtifactError(f"no forecast at {path}")
    return forecast_from_doc(json.loads(path.read_text(encoding="utf-8")))


def _entry_to_model(run_dir: Path, entry: dict) -> TrainedModel:
    blob = run_dir / entry["file"]
    if not blob.exists():
        raise ArtifactError(f"missing estimator blob {blob}")
    return TrainedModel(
        kind=entry["kind"],
        hyperparams=dict(entry["hyperparams"]),
        estimator=joblib.load(blob),
        feature_names=tuple(entry["feature_names"]),
        seed=entry["seed"],
        train_range=(
            date.fromisoformat(entry["train_range"][0]),
            date.fromisoformat(entry["train_range"][1]),
        ),
        cv_mse=entry["cv_mse"],
        test_rmse=entry["test_rmse"],
        test_mae=entry["test_mae"],
    )


def load_models(run_dir: str | Path) -> tuple[dict[str, TrainedModel], TrainedModel]:
    """(registry models, baseline) reloaded from a run directory."""
    run_dir = Path(run_dir)
    manifest = load_manifest(run_dir)
    models = {e["kind"]: _entry_to_model(run_dir, e) for e in manifest["models"]}
    baseline = _entry_to_model(run_dir, manifest["baseline"])
    return models, baseline
