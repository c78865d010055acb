"""Blocked cross-validation for time-ordered rows.

Rows are cut into k contiguous blocks. Inside each block the first 80%
(floored) of rows train and the remainder validate, so validation rows
always sit after their training rows and no pair of folds shares data.
Shuffled k-fold would let a model peek at the future; this split keeps
score estimates honest for series with trend and autocorrelation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class SplitError(ValueError):
    """The requested split cannot produce valid folds."""


@dataclass(frozen=True)
class CvConfig:
    """Fold count for blocked CV; the objective is always mean squared error."""

    folds: int = 10

    def validate(self) -> None:
        if self.folds < 2:
            raise SplitError(f"folds must be >= 2, got {self.folds}")


def blocked_cv_split(n: int, folds: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """(train_idx, val_idx) per fold over row indices 0..n-1.

    Blocks are as equal as possible: the first n % folds blocks get one
    extra row. n must be at least 2 * folds so every block can donate
    at least one row to each side of the 80/20 cut.
    """
    if folds < 2:
        raise SplitError(f"folds must be >= 2, got {folds}")
    if n < 2 * folds:
        raise SplitError(f"need at least {2 * folds} rows for {folds} folds, got {n}")
    out = []
    for block in np.array_split(np.arange(n), folds):
        cut = int(np.floor(0.8 * len(block)))
        out.append((block[:cut], block[cut:]))
    return out
