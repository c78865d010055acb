"""Feature matrices for lead-time forecasting.

A feature row for date d packs: lagged values of the smoothed target
(every lag at least as long as the forecast horizon, so nothing from
the unknown future leaks in), indicator values observed at d, and 0/1
calendar flags for d. Its label is the target value at d + horizon.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date, timedelta
from typing import Mapping, Sequence

import numpy as np
from dateutil import easter

from .series import DailySeries, SeriesError, TargetSpec

#: Calendar flags the feature builder understands.
CALENDAR_FLAGS = (
    "christmas_week",
    "easter_week",
    "school_holidays",
    "bus_days",
    "border_closed",
    "notable_dates",
)


class FeatureError(ValueError):
    """A feature request is malformed or would leak future information."""


def christmas_week_dates(years: Sequence[int]) -> frozenset[date]:
    """December 22-28 of each year."""
    return frozenset(
        date(year, 12, 22) + timedelta(days=i) for year in years for i in range(7)
    )


def easter_week_dates(years: Sequence[int]) -> frozenset[date]:
    """The seven days ending on Easter Sunday of each year."""
    out = set()
    for year in years:
        sunday = easter.easter(year)
        out.update(sunday - timedelta(days=i) for i in range(7))
    return frozenset(out)


@dataclass(frozen=True)
class FeatureSpec:
    """Which columns to build.

    ``calendar_flags`` maps a flag name from CALENDAR_FLAGS to the set
    of dates on which it is 1. Flags like school holidays or border
    closures are jurisdiction facts, so the caller supplies the dates.
    """

    target_lags: tuple[int, ...] = (30, 37, 44)
    indicators: tuple[str, ...] = ()
    calendar_flags: Mapping[str, frozenset[date]] = field(default_factory=dict)

    def validate(self, horizon: int) -> None:
        if not self.target_lags:
            raise FeatureError("need at least one target lag")
        if len(set(self.target_lags)) != len(self.target_lags):
            raise FeatureError("target lags must be distinct")
        for lag in self.target_lags:
            if lag < horizon:
                raise FeatureError(
                    f"lag {lag} is shorter than the {horizon}-day horizon; "
                    f"at prediction time that value is not observable yet"
                )
        unknown = sorted(set(self.calendar_flags) - set(CALENDAR_FLAGS))
        if unknown:
            raise FeatureError(f"unknown calendar flags: {', '.join(unknown)}")

    def column_names(self) -> tuple[str, ...]:
        cols = [f"target_lag_{lag}" for lag in self.target_lags]
        cols.extend(self.indicators)
        cols.extend(sorted(self.calendar_flags))
        return tuple(cols)


@dataclass(frozen=True)
class FeatureRows:
    """Feature values without labels, one row per date."""

    dates: tuple[date, ...]
    feature_names: tuple[str, ...]
    X: np.ndarray

    def __post_init__(self) -> None:
        X = np.asarray(self.X, dtype=float)
        if X.shape != (len(self.dates), len(self.feature_names)):
            raise FeatureError("feature block shape does not match dates/columns")
        object.__setattr__(self, "X", X)

    def __len__(self) -> int:
        return len(self.dates)


@dataclass(frozen=True)
class FeatureMatrix:
    """Labelled feature rows, dates strictly ascending, nothing missing."""

    dates: tuple[date, ...]
    feature_names: tuple[str, ...]
    X: np.ndarray
    y: np.ndarray

    def __post_init__(self) -> None:
        X = np.asarray(self.X, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if X.shape != (len(self.dates), len(self.feature_names)) or y.shape != (
            len(self.dates),
        ):
            raise FeatureError("feature matrix shapes do not line up")
        if not (np.isfinite(X).all() and np.isfinite(y).all()):
            raise FeatureError("feature matrix must be fully observed")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)

    def __len__(self) -> int:
        return len(self.dates)

    @property
    def rows(self) -> FeatureRows:
        return FeatureRows(self.dates, self.feature_names, self.X)

    def take(self, idx: Sequence[int]) -> "FeatureMatrix":
        idx = np.asarray(idx, dtype=int)
        return FeatureMatrix(
            dates=tuple(self.dates[i] for i in idx),
            feature_names=self.feature_names,
            X=self.X[idx],
            y=self.y[idx],
        )

    def split_tail(self, n_test: int) -> tuple["FeatureMatrix", "FeatureMatrix"]:
        """Chronological split keeping the last ``n_test`` rows for testing."""
        if not 0 < n_test < len(self):
            raise FeatureError(
                f"n_test must be in 1..{len(self) - 1}, got {n_test}"
            )
        cut = len(self) - n_test
        return self.take(range(cut)), self.take(range(cut, len(self)))


def _lookup(series: DailySeries, day: date) -> float:
    offset = (day - series.start).days
    if not 0 <= offset < len(series.values):
        return float("nan")
    return float(series.values[offset])


def _assemble(
    target: DailySeries,
    indicators: Mapping[str, DailySeries],
    spec: FeatureSpec,
    days: Sequence[date],
) -> np.ndarray:
    flag_names = sorted(spec.calendar_flags)
    rows = np.empty((len(days), len(spec.column_names())), dtype=float)
    for r, day in enumerate(days):
        c = 0
        for lag in spec.target_lags:
            rows[r, c] = _lookup(target, day - timedelta(days=lag))
            c += 1
        for name in spec.indicators:
            rows[r, c] = _lookup(indicators[name], day)
            c += 1
        for name in flag_names:
            rows[r, c] = 1.0 if day in spec.calendar_flags[name] else 0.0
            c += 1
    return rows


def build_features(
    target: DailySeries,
    indicators: Mapping[str, DailySeries],
    spec: FeatureSpec,
    target_spec: TargetSpec,
) -> FeatureMatrix:
    """Labelled rows for every date where all inputs and the label exist.

    Rows whose label, any lag, or any indicator value is missing are
    dropped, so the result is dense and strictly date-ascending.
    """
    target_spec.validate()
    spec.validate(target_spec.horizon)
    missing_sources = sorted(set(spec.indicators) - set(indicators))
    if missing_sources:
        raise FeatureError(f"indicator series not supplied: {', '.join(missing_sources)}")

    candidates = target.dates()
    X_all = _assemble(target, indicators, spec, candidates)
    y_all = np.array(
        [_lookup(target, d + timedelta(days=target_spec.horizon)) for d in candidates]
    )
    keep = np.isfinite(X_all).all(axis=1) & np.isfinite(y_all)
    if not keep.any():
        raise FeatureError("no usable rows: inputs and labels never overlap")
    kept_dates = tuple(d for d, k in zip(candidates, keep) if k)
    return FeatureMatrix(
        dates=kept_dates,
        feature_names=spec.column_names(),
        X=X_all[keep],
        y=y_all[keep],
    )


def build_feature_rows(
    target: DailySeries,
    indicators: Mapping[str, DailySeries],
    spec: FeatureSpec,
    target_spec: TargetSpec,
    days: Sequence[date],
) -> FeatureRows:
    """Unlabelled rows for explicit dates, e.g. days past the data edge.

    Every requested date must have all its inputs observed; asking for
    a date whose lags or indicators are missing is an error rather than
    a silent drop, because the caller chose the dates deliberately.
    """
    target_spec.validate()
    spec.validate(target_spec.horizon)
    X = _assemble(target, indicators, spec, days)
    bad = [d.isoformat() for d, row in zip(days, X) if not np.isfinite(row).all()]
    if bad:
        raise FeatureError(f"inputs missing for requested dates: {', '.join(bad)}")
    return FeatureRows(dates=tuple(days), feature_names=spec.column_names(), X=X)
