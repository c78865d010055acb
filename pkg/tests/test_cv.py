"""Blocked cross-validation split contract."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from borderflow.forecasting.cv import CvConfig, SplitError, blocked_cv_split


def oracle_split(n, k):
    """Independent route: explicit block boundaries, no numpy helpers."""
    base, extra = divmod(n, k)
    folds = []
    start = 0
    for b in range(k):
        size = base + (1 if b < extra else 0)
        block = list(range(start, start + size))
        cut = int(0.8 * size)  # floor for non-negative values
        folds.append((block[:cut], block[cut:]))
        start += size
    return folds


@pytest.mark.parametrize("n", [100, 137, 20, 47, 200])
def test_matches_oracle(n):
    result = blocked_cv_split(n, 10)
    expected = oracle_split(n, 10)
    assert len(result) == 10
    for (train, val), (etrain, eval_) in zip(result, expected):
        assert list(train) == etrain
        assert list(val) == eval_


def test_exact_indices_n100():
    folds = blocked_cv_split(100, 10)
    train0, val0 = folds[0]
    assert list(train0) == list(range(8))
    assert list(val0) == [8, 9]
    train9, val9 = folds[9]
    assert list(train9) == list(range(90, 98))
    assert list(val9) == [98, 99]


def test_exact_indices_n137():
    # 137 = 10*13 + 7: first seven blocks get 14 rows, the rest 13
    folds = blocked_cv_split(137, 10)
    sizes = [len(t) + len(v) for t, v in folds]
    assert sizes == [14] * 7 + [13] * 3
    train0, val0 = folds[0]
    assert list(train0) == list(range(11))  # floor(0.8 * 14) = 11
    assert list(val0) == [11, 12, 13]
    train7, val7 = folds[7]
    assert list(train7) == list(range(98, 108))  # floor(0.8 * 13) = 10
    assert list(val7) == [108, 109, 110]


def test_exact_indices_n20():
    folds = blocked_cv_split(20, 10)
    for b, (train, val) in enumerate(folds):
        assert list(train) == [2 * b]
        assert list(val) == [2 * b + 1]


@given(
    n=st.integers(min_value=4, max_value=500),
    k=st.integers(min_value=2, max_value=20),
)
@settings(max_examples=200)
def test_split_properties(n, k):
    if n < 2 * k:
        with pytest.raises(SplitError):
            blocked_cv_split(n, k)
        return
    folds = blocked_cv_split(n, k)
    seen = []
    for train, val in folds:
        rows = list(train) + list(val)
        # contiguous block, train strictly before validation
        assert rows == list(range(rows[0], rows[-1] + 1))
        assert len(train) >= 1 and len(val) >= 1
        assert max(train) < min(val)
        assert len(train) == int(np.floor(0.8 * len(rows)))
        seen.extend(rows)
    # disjoint and exhaustive over 0..n-1, in time order
    assert seen == list(range(n))


def test_rejects_bad_requests():
    with pytest.raises(SplitError, match="folds"):
        blocked_cv_split(100, 1)
    with pytest.raises(SplitError, match="at least 20"):
        blocked_cv_split(19, 10)
    with pytest.raises(SplitError):
        CvConfig(folds=0).validate()
