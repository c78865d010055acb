"""Inverse-RMSE weighting and ensemble aggregation.

A model that misses by half as much speaks twice as loudly: weights are
proportional to 1/RMSE on held-out data, normalized to sum to one. The
ensemble point forecast and its interval bounds are the weighted means
of the per-model values, so the ensemble can never leave the envelope
of its components.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date
from typing import Mapping, Sequence

import numpy as np


class EnsembleError(ValueError):
    """Inputs to weighting or aggregation are inconsistent."""


def ensemble_weights(rmse_by_model: Mapping[str, float]) -> dict[str, float]:
    """Normalized inverse-RMSE weights.

    A perfect model (RMSE exactly zero) would get infinite weight, so
    any zero-RMSE models split all the weight equally between them and
    everyone else gets zero.
    """
    if not rmse_by_model:
        raise EnsembleError("need at least one model to weight")
    for name, rmse in rmse_by_model.items():
        if not np.isfinite(rmse) or rmse < 0:
            raise EnsembleError(f"{name}: rmse must be finite and >= 0, got {rmse!r}")

    zero = [name for name, rmse in rmse_by_model.items() if rmse == 0.0]
    if zero:
        return {name: (1.0 / len(zero) if name in zero else 0.0) for name in rmse_by_model}
    inverse = {name: 1.0 / rmse for name, rmse in rmse_by_model.items()}
    total = sum(inverse.values())
    return {name: inv / total for name, inv in inverse.items()}


def _check_alignment(
    arrays: Mapping[str, np.ndarray], weights: Mapping[str, float]
) -> int:
    if set(arrays) != set(weights):
        raise EnsembleError(
            f"model names differ: {sorted(arrays)} vs {sorted(weights)}"
        )
    lengths = {len(a) for a in arrays.values()}
    if len(lengths) != 1:
        raise EnsembleError(f"per-model arrays have mixed lengths: {sorted(lengths)}")
    (n,) = lengths
    if n == 0:
        raise EnsembleError("per-model arrays are empty")
    total = sum(weights.values())
    if abs(total - 1.0) > 1e-9 or any(w < 0 for w in weights.values()):
        raise EnsembleError(f"weights must be >= 0 and sum to 1, got sum {total!r}")
    return n


def ensemble_predict(
    predictions: Mapping[str, np.ndarray], weights: Mapping[str, float]
) -> np.ndarray:
    """Weighted mean of per-model predictions, date by date."""
    n = _check_alignment(predictions, weights)
    out = np.zeros(n)
    for name, pred in predictions.items():
        out += weights[name] * np.asarray(pred, dtype=float)
    return out


def ensemble_intervals(
    intervals: Mapping[str, tuple[np.ndarray, np.ndarray]],
    weights: Mapping[str, float],
) -> tuple[np.ndarray, np.ndarray]:
    """Weighted means of per-model lower and upper bounds."""
    lowers = {name: np.asarray(lo, dtype=float) for name, (lo, _) in intervals.items()}
    uppers = {name: np.asarray(up, dtype=float) for name, (_, up) in intervals.items()}
    for name in intervals:
        if len(lowers[name]) != len(uppers[name]):
            raise EnsembleError(f"{name}: lower and upper bounds have different lengths")
        if (lowers[name] > uppers[name]).any():
            raise EnsembleError(f"{name}: lower bound exceeds upper bound")
    lo = ensemble_predict(lowers, weights)
    up = ensemble_predict(uppers, weights)
    return lo, up


@dataclass(frozen=True)
class EnsembleForecast:
    """Per-model and combined forecasts over a date range.

    ``truth`` carries observed target values where known and NaN past
    the data edge, so exports and plots can show both regimes.
    """

    dates: tuple[date, ...]
    per_model: dict[str, np.ndarray]
    weights: dict[str, float]
    point: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    level: float
    truth: np.ndarray

    def __post_init__(self) -> None:
        n = len(self.dates)
        if n == 0:
            raise EnsembleError("forecast covers no dates")
        for name, arr in self.per_model.items():
            if len(arr) != n:
                raise EnsembleError(f"{name}: prediction length != number of dates")
        for label, arr in (
            ("point", self.point),
            ("lower", self.lower),
            ("upper", self.upper),
            ("truth", self.truth),
        ):
            if len(arr) != n:
                raise EnsembleError(f"{label} length != number of dates")
        if not 0 < self.level < 1:
            raise EnsembleError(f"level must be in (0, 1), got {self.level!r}")
        if (self.lower > self.point).any() or (self.point > self.upper).any():
            raise EnsembleError("interval must bracket the point forecast")


def assemble_forecast(
    dates: Sequence[date],
    per_model: Mapping[str, np.ndarray],
    weights: Mapping[str, float],
    intervals: Mapping[str, tuple[np.ndarray, np.ndarray]],
    level: float,
    truth: np.ndarray,
) -> EnsembleForecast:
    point = ensemble_predict(per_model, weights)
    lower, upper = ensemble_intervals(intervals, weights)
    # averaging quantiles can nick the point forecast on skewed residuals;
    # widen minimally so the interval always brackets the point
    lower = np.minimum(lower, point)
    upper = np.maximum(upper, point)
    return EnsembleForecast(
        dates=tuple(dates),
        per_model={name: np.asarray(arr, dtype=float) for name, arr in per_model.items()},
        weights=dict(weights),
        point=point,
        lower=lower,
        upper=upper,
        level=level,
        truth=np.asarray(truth, dtype=float),
    )
