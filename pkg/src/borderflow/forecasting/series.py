"""Contiguous daily series and the smoothed forecast target."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date, timedelta

import numpy as np


class SeriesError(ValueError):
    """A daily series or target request is malformed."""


@dataclass(frozen=True)
class DailySeries:
    """One value per calendar day over a contiguous range.

    Missing observations are NaN; everything else must be finite.
    """

    name: str
    start: date
    values: np.ndarray
    units: str = ""

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=float).copy()
        if arr.ndim != 1 or arr.size == 0:
            raise SeriesError(f"{self.name}: values must be a non-empty 1-d array")
        if np.isinf(arr).any():
            raise SeriesError(f"{self.name}: values must be finite or NaN")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def end(self) -> date:
        return self.start + timedelta(days=len(self.values) - 1)

    def dates(self) -> list[date]:
        return [self.start + timedelta(days=i) for i in range(len(self.values))]

    def index_of(self, day: date) -> int:
        offset = (day - self.start).days
        if not 0 <= offset < len(self.values):
            raise SeriesError(f"{self.name}: {day.isoformat()} outside series range")
        return offset

    def value_at(self, day: date) -> float:
        return float(self.values[self.index_of(day)])


@dataclass(frozen=True)
class TargetSpec:
    """Trailing moving-average smoothing plus the lead time to predict."""

    window: int = 7
    horizon: int = 30

    def validate(self) -> None:
        if self.window < 1:
            raise SeriesError(f"window must be >= 1, got {self.window}")
        if self.horizon < 1:
            raise SeriesError(f"horizon must be >= 1, got {self.horizon}")


def build_target(arrivals: DailySeries, spec: TargetSpec) -> DailySeries:
    """Trailing ``spec.window``-day mean of arrivals.

    Day d of the result averages the raw values over d-window+1 .. d,
    so the first window-1 days have no value and are dropped. Any NaN
    inside a window propagates: a smoothed value is only real when the
    whole window is observed.
    """
    spec.validate()
    if len(arrivals) < spec.window:
        raise SeriesError(
            f"need at least {spec.window} days of arrivals, got {len(arrivals)}"
        )
    kernel = np.full(spec.window, 1.0 / spec.window)
    smoothed = np.convolve(arrivals.values, kernel, mode="valid")
    return DailySeries(
        name=f"{arrivals.name}_ma{spec.window}",
        start=arrivals.start + timedelta(days=spec.window - 1),
        values=smoothed,
        units=arrivals.units,
    )
