"""Daily series container and moving-average target."""

from datetime import date, timedelta

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from borderflow.forecasting.series import (
    DailySeries,
    SeriesError,
    TargetSpec,
    build_target,
)


def make_series(values, start=date(2021, 7, 26)):
    return DailySeries(name="arrivals", start=start, values=np.array(values, dtype=float))


def test_series_basics():
    s = make_series([1, 2, 3])
    assert len(s) == 3
    assert s.end == date(2021, 7, 28)
    assert s.value_at(date(2021, 7, 27)) == 2.0
    with pytest.raises(SeriesError):
        s.value_at(date(2021, 7, 29))


def test_series_rejects_inf_and_empty():
    with pytest.raises(SeriesError):
        make_series([1.0, float("inf")])
    with pytest.raises(SeriesError):
        make_series([])


def test_values_read_only():
    s = make_series([1, 2, 3])
    with pytest.raises(ValueError):
        s.values[0] = 9.0


def test_target_hand_example():
    s = make_series([7, 14, 21, 28])
    target = build_target(s, TargetSpec(window=2, horizon=1))
    assert target.start == date(2021, 7, 27)
    assert list(target.values) == [10.5, 17.5, 24.5]
    assert target.name == "arrivals_ma2"


@given(
    values=st.lists(
        st.floats(min_value=0, max_value=1e6, allow_nan=False), min_size=7, max_size=60
    ),
    window=st.integers(min_value=1, max_value=7),
)
@settings(max_examples=100)
def test_target_matches_bruteforce_loop(values, window):
    s = make_series(values)
    target = build_target(s, TargetSpec(window=window, horizon=30))
    # independent route: direct python loop over every trailing window
    expected = [
        sum(values[i - window + 1 : i + 1]) / window
        for i in range(window - 1, len(values))
    ]
    assert len(target) == len(expected)
    assert np.allclose(target.values, expected, rtol=1e-12, atol=1e-9)
    assert target.start == s.start + timedelta(days=window - 1)


def test_target_propagates_missing():
    s = make_series([1, 2, np.nan, 4, 5, 6, 7, 8, 9, 10])
    target = build_target(s, TargetSpec(window=3, horizon=1))
    # windows touching index 2 are poisoned, the rest are real
    assert np.isnan(target.values[:3]).all()
    assert np.isfinite(target.values[3:]).all()


def test_target_too_short():
    with pytest.raises(SeriesError, match="at least 7"):
        build_target(make_series([1, 2, 3]), TargetSpec(window=7, horizon=30))


def test_target_spec_validation():
    with pytest.raises(SeriesError):
        TargetSpec(window=0).validate()
    with pytest.raises(SeriesError):
        TargetSpec(horizon=0).validate()
