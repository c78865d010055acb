"""Residual-bootstrap prediction intervals.

In-sample residuals stand in for future errors: resample them with
replacement, add each draw to the point forecast, and read empirical
quantiles off the simulated distribution. Cheap, distribution-free,
and honest as long as residuals look exchangeable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .features import FeatureMatrix, FeatureRows
from .models import TrainedModel, predict


class BootstrapError(ValueError):
    """The bootstrap request cannot produce a trustworthy interval."""


@dataclass(frozen=True)
class BootstrapConfig:
    replicates: int = 1000
    level: float = 0.80
    seed: int = 0

    def validate(self) -> None:
        if self.replicates < 100:
            raise BootstrapError(
                f"replicates must be >= 100 for stable quantiles, got {self.replicates}"
            )
        if not 0 < self.level < 1:
            raise BootstrapError(f"level must be in (0, 1), got {self.level!r}")


def bootstrap_intervals(
    model: TrainedModel,
    fit_matrix: FeatureMatrix,
    rows: FeatureRows,
    config: BootstrapConfig,
) -> tuple[np.ndarray, np.ndarray]:
    """(lower, upper) bounds for ``model`` over ``rows``.

    Residuals come from ``fit_matrix``, the rows the model was fitted
    on. Fewer than 10 residuals cannot anchor an 80% quantile pair, so
    that is an error. The lower bound is clipped at zero to match the
    point forecasts. Same seed, same interval.
    """
    config.validate()
    residuals = fit_matrix.y - predict(model, fit_matrix.rows)
    if len(residuals) < 10:
        raise BootstrapError(
            f"need at least 10 in-sample residuals, got {len(residuals)}"
        )
    point = predict(model, rows)
    rng = np.random.default_rng(config.seed)
    draws = rng.choice(residuals, size=(config.replicates, len(point)), replace=True)
    simulated = point[np.newaxis, :] + draws
    alpha = (1.0 - config.level) / 2.0
    lower = np.quantile(simulated, alpha, axis=0)
    upper = np.quantile(simulated, 1.0 - alpha, axis=0)
    lower = np.maximum(lower, 0.0)
    upper = np.maximum(upper, 0.0)  # keeps lower <= upper after clipping
    return lower, upper
