"""Regression model registry, grid-search fitting, and scoring.

Estimators come from scikit-learn; everything around them (grid order,
tie-breaking, refitting, clipping, metrics) is pinned down here so the
rest of the package never touches sklearn directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date
from typing import Any, Mapping, Sequence

import numpy as np
from sklearn.ensemble import GradientBoostingRegressor, RandomForestRegressor
from sklearn.linear_model import Lasso, Ridge
from sklearn.tree import DecisionTreeRegressor

from .cv import CvConfig, blocked_cv_split
from .features import FeatureMatrix, FeatureRows

MODEL_KINDS = ("ridge", "lasso", "decision_tree", "random_forest", "gradient_boosting")
BASELINE_KIND = "historical_mean"


class ModelError(ValueError):
    """A model spec, fit request, or prediction request is invalid."""


@dataclass(frozen=True)
class ModelSpec:
    """One model kind plus an ordered hyperparameter grid.

    Grid order matters: when two settings tie on CV score the one with
    the smaller index wins, which keeps retraining reproducible.
    """

    kind: str
    grid: tuple[Mapping[str, Any], ...]

    def validate(self) -> None:
        if self.kind not in MODEL_KINDS:
            raise ModelError(f"unknown model kind {self.kind!r}; choose from {MODEL_KINDS}")
        if not self.grid:
            raise ModelError(f"{self.kind}: hyperparameter grid is empty")
        for hp in self.grid:
            _check_hyperparams(self.kind, hp)


def _check_hyperparams(kind: str, hp: Mapping[str, Any]) -> None:
    if kind in ("ridge", "lasso"):
        alpha = hp.get("alpha")
        if alpha is None or alpha < 0:
            raise ModelError(f"{kind}: alpha must be >= 0, got {alpha!r}")
    if kind in ("decision_tree", "random_forest", "gradient_boosting"):
        depth = hp.get("max_depth", None)
        if depth is not None and depth < 1:
            raise ModelError(f"{kind}: max_depth must be >= 1 or omitted, got {depth!r}")
    if kind in ("random_forest", "gradient_boosting"):
        n = hp.get("n_estimators", 100)
        if n < 1:
            raise ModelError(f"{kind}: n_estimators must be >= 1, got {n!r}")


def default_registry() -> list[ModelSpec]:
    """The stock model set with small, fast grids."""
    return [
        ModelSpec("ridge", ({"alpha": 0.1}, {"alpha": 1.0}, {"alpha": 10.0}, {"alpha": 100.0})),
        ModelSpec("lasso", ({"alpha": 0.01}, {"alpha": 0.1}, {"alpha": 1.0}, {"alpha": 10.0})),
        ModelSpec(
            "decision_tree",
            ({"max_depth": 2}, {"max_depth": 3}, {"max_depth": 5}, {"max_depth": 8}),
        ),
        ModelSpec(
            "random_forest",
            (
                {"n_estimators": 200, "max_depth": 3},
                {"n_estimators": 200, "max_depth": 5},
                {"n_estimators": 200, "max_depth": None},
            ),
        ),
        ModelSpec(
            "gradient_boosting",
            (
                {"n_estimators": 200, "learning_rate": 0.05, "max_depth": 2},
                {"n_estimators": 200, "learning_rate": 0.05, "max_depth": 3},
            ),
        ),
    ]


class HistoricalMeanEstimator:
    """Predicts the training-label mean no matter the features."""

    def __init__(self) -> None:
        self.mean_ = float("nan")

    def fit(self, X: np.ndarray, y: np.ndarray) -> "HistoricalMeanEstimator":
        self.mean_ = float(np.mean(y))
        return self

    def predict(self, X: np.ndarray) -> np.ndarray:
        return np.full(len(X), self.mean_)


def _make_estimator(kind: str, hp: Mapping[str, Any], seed: int):
    if kind == "ridge":
        # svd solver reproduces the exact least-squares solution at alpha=0
        return Ridge(alpha=hp["alpha"], solver="svd")
    if kind == "lasso":
        return Lasso(alpha=hp["alpha"], max_iter=50_000)
    if kind == "decision_tree":
        return DecisionTreeRegressor(random_state=seed, **hp)
    if kind == "random_forest":
        return RandomForestRegressor(random_state=seed, **hp)
    if kind == "gradient_boosting":
        return GradientBoostingRegressor(random_state=seed, **hp)
    raise ModelError(f"unknown model kind {kind!r}")


@dataclass
class TrainedModel:
    """A fitted estimator plus everything needed to reuse or audit it."""

    kind: str
    hyperparams: dict[str, Any]
    estimator: Any
    feature_names: tuple[str, ...]
    seed: int
    train_range: tuple[date, date]
    cv_mse: float | None = None
    test_rmse: float | None = None
    test_mae: float | None = None


def fit_model(
    spec: ModelSpec,
    matrix: FeatureMatrix,
    cv: CvConfig | None = None,
    seed: int = 0,
) -> TrainedModel:
    """Grid-search ``spec`` under blocked CV, then refit on all rows.

    The winning setting minimizes mean validation MSE across folds;
    exact ties go to the smallest grid index.
    """
    spec.validate()
    cv = cv or CvConfig()
    cv.validate()
    if len(matrix) == 0:
        raise ModelError("cannot fit on an empty matrix")

    folds = blocked_cv_split(len(matrix), cv.folds)
    best_idx = 0
    best_mse = float("inf")
    for idx, hp in enumerate(spec.grid):
        fold_mses = []
        for train_idx, val_idx in folds:
            est = _make_estimator(spec.kind, hp, seed)
            est.fit(matrix.X[train_idx], matrix.y[train_idx])
            pred = est.predict(matrix.X[val_idx])
            fold_mses.append(float(np.mean((pred - matrix.y[val_idx]) ** 2)))
        mean_mse = float(np.mean(fold_mses))
        if mean_mse < best_mse:
            best_mse = mean_mse
            best_idx = idx

    best_hp = dict(spec.grid[best_idx])
    est = _make_estimator(spec.kind, best_hp, seed)
    est.fit(matrix.X, matrix.y)
    return TrainedModel(
        kind=spec.kind,
        hyperparams=best_hp,
        estimator=est,
        feature_names=matrix.feature_names,
        seed=seed,
        train_range=(matrix.dates[0], matrix.dates[-1]),
        cv_mse=best_mse,
    )


def refit(model: TrainedModel, matrix: FeatureMatrix) -> TrainedModel:
    """Refit with the already-chosen hyperparameters on new rows."""
    if matrix.feature_names != model.feature_names:
        raise ModelError(
            f"{model.kind}: refit matrix columns {matrix.feature_names} "
            f"do not match training columns {model.feature_names}"
        )
    if model.kind == BASELINE_KIND:
        est = HistoricalMeanEstimator().fit(matrix.X, matrix.y)
    else:
        est = _make_estimator(model.kind, model.hyperparams, model.seed)
        est.fit(matrix.X, matrix.y)
    return TrainedModel(
        kind=model.kind,
        hyperparams=dict(model.hyperparams),
        estimator=est,
        feature_names=model.feature_names,
        seed=model.seed,
        train_range=(matrix.dates[0], matrix.dates[-1]),
        cv_mse=model.cv_mse,
        test_rmse=model.test_rmse,
        test_mae=model.test_mae,
    )


def baseline_historical_mean(matrix: FeatureMatrix) -> TrainedModel:
    """The default strategy every real model must beat."""
    if len(matrix) == 0:
        raise ModelError("cannot fit baseline on an empty matrix")
    est = HistoricalMeanEstimator().fit(matrix.X, matrix.y)
    return TrainedModel(
        kind=BASELINE_KIND,
        hyperparams={},
        estimator=est,
        feature_names=matrix.feature_names,
        seed=0,
        train_range=(matrix.dates[0], matrix.dates[-1]),
    )


def predict(model: TrainedModel, rows: FeatureRows) -> np.ndarray:
    """Point predictions, clipped at zero because arrivals cannot be negative."""
    if rows.feature_names != model.feature_names:
        raise ModelError(
            f"{model.kind}: prediction columns {rows.feature_names} "
            f"do not match training columns {model.feature_names}"
        )
    raw = np.asarray(model.estimator.predict(rows.X), dtype=float)
    if not np.isfinite(raw).all():
        raise ModelError(f"{model.kind}: non-finite prediction")
    return np.maximum(raw, 0.0)


def evaluate(predictions: np.ndarray, truth: np.ndarray) -> tuple[float, float]:
    """(rmse, mae) over aligned prediction/truth arrays."""
    predictions = np.asarray(predictions, dtype=float)
    truth = np.asarray(truth, dtype=float)
    if predictions.shape != truth.shape or predictions.ndim != 1 or len(predictions) == 0:
        raise ModelError("predictions and truth must be equal-length non-empty vectors")
    if not (np.isfinite(predictions).all() and np.isfinite(truth).all()):
        raise ModelError("predictions and truth must be finite")
    err = predictions - truth
    rmse = float(np.sqrt(np.mean(err**2)))
    mae = float(np.mean(np.abs(err)))
    return rmse, mae
