"""End-to-end ensemble training.

Chronological protocol: hold out the trailing rows as a test window,
grid-search each registry model on the training window with blocked
CV, score everything on the test window, weight models by inverse test
RMSE, and bootstrap per-model intervals. If rows past the data edge
are supplied, models are refit on all labelled rows with their chosen
hyperparameters before predicting there, so the extension uses every
observation without touching the held-out scores.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .bootstrap import BootstrapConfig, bootstrap_intervals
from .cv import CvConfig
from .ensemble import EnsembleForecast, assemble_forecast, ensemble_weights
from .features import FeatureMatrix, FeatureRows
from .models import (
    ModelError,
    ModelSpec,
    TrainedModel,
    baseline_historical_mean,
    default_registry,
    evaluate,
    fit_model,
    predict,
    refit,
)


@dataclass(frozen=True)
class MetricsRow:
    """One line of the training report."""

    model: str
    cv_mse: float | None
    test_rmse: float
    test_mae: float
    weight: float | None  # None for the baseline, which is never ensembled


@dataclass
class TrainResult:
    models: dict[str, TrainedModel]
    baseline: TrainedModel
    weights: dict[str, float]
    forecast: EnsembleForecast
    metrics: list[MetricsRow] = field(default_factory=list)


def train_ensemble(
    matrix: FeatureMatrix,
    n_test: int,
    registry: Sequence[ModelSpec] | None = None,
    cv: CvConfig | None = None,
    bootstrap: BootstrapConfig | None = None,
    seed: int = 0,
    future_rows: FeatureRows | None = None,
) -> TrainResult:
    registry = list(registry) if registry is not None else default_registry()
    if not registry:
        raise ModelError("model registry is empty")
    kinds = [spec.kind for spec in registry]
    if len(set(kinds)) != len(kinds):
        raise ModelError("model registry has duplicate kinds")
    cv = cv or CvConfig()
    bootstrap = bootstrap or BootstrapConfig()
    bootstrap.validate()

    train, test = matrix.split_tail(n_test)

    models: dict[str, TrainedModel] = {}
    test_preds: dict[str, np.ndarray] = {}
    test_intervals: dict[str, tuple[np.ndarray, np.ndarray]] = {}
    for idx, spec in enumerate(registry):
        model = fit_model(spec, train, cv, seed)
        pred = predict(model, test.rows)
        model.test_rmse, model.test_mae = evaluate(pred, test.y)
        models[spec.kind] = model
        test_preds[spec.kind] = pred
        # per-model seed offset keeps draws independent across models
        # while the whole run stays reproducible
        cfg = replace(bootstrap, seed=bootstrap.seed + idx)
        test_intervals[spec.kind] = bootstrap_intervals(model, train, test.rows, cfg)

    baseline = baseline_historical_mean(train)
    baseline_pred = predict(baseline, test.rows)
    baseline.test_rmse, baseline.test_mae = evaluate(baseline_pred, test.y)

    weights = ensemble_weights({k: m.test_rmse for k, m in models.items()})

    dates = list(test.dates)
    per_model = {k: p for k, p in test_preds.items()}
    intervals = dict(test_intervals)
    truth = test.y.copy()

    if future_rows is not None and len(future_rows) > 0:
        for idx, (kind, model) in enumerate(models.items()):
            full_model = refit(model, matrix)
            future_pred = predict(full_model, future_rows)
            cfg = replace(bootstrap, seed=bootstrap.seed + idx)
            lo, up = bootstrap_intervals(full_model, matrix, future_rows, cfg)
            per_model[kind] = np.concatenate([per_model[kind], future_pred])
            old_lo, old_up = intervals[kind]
            intervals[kind] = (
                np.concatenate([old_lo, lo]),
                np.concatenate([old_up, up]),
            )
        dates.extend(future_rows.dates)
        truth = np.concatenate([truth, np.full(len(future_rows), np.nan)])

    forecast = assemble_forecast(
        dates=dates,
        per_model=per_model,
        weights=weights,
        intervals=intervals,
        level=bootstrap.level,
        truth=truth,
    )

    metrics = [
        MetricsRow(
            model=kind,
            cv_mse=model.cv_mse,
            test_rmse=model.test_rmse,
            test_mae=model.test_mae,
            weight=weights[kind],
        )
        for kind, model in models.items()
    ]
    metrics.append(
        MetricsRow(
            model=baseline.kind,
            cv_mse=None,
            test_rmse=baseline.test_rmse,
            test_mae=baseline.test_mae,
            weight=None,
        )
    )

    return TrainResult(
        models=models,
        baseline=baseline,
        weights=weights,
        forecast=forecast,
        metrics=metrics,
    )
