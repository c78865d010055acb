import numpy as np
import pytest

from borderflow.forecasting.features import FeatureSpec, build_features
from borderflow.forecasting.series import TargetSpec, build_target
from borderflow.synthetic import SyntheticSpec, make_synthetic_dataset


@pytest.fixture(scope="session")
def synthetic_dataset():
    return make_synthetic_dataset(SyntheticSpec(seed=2))


@pytest.fixture(scope="session")
def feature_matrix(synthetic_dataset):
    arrivals, indicators = synthetic_dataset
    tspec = TargetSpec(window=7, horizon=30)
    fspec = FeatureSpec(
        target_lags=(30, 37, 44), indicators=("fuel_price", "help_requests")
    )
    return build_features(build_target(arrivals, tspec), indicators, fspec, tspec)


@pytest.fixture(scope="session")
def small_matrix(feature_matrix):
    # enough rows for 10-fold blocked CV but cheap to fit repeatedly
    return feature_matrix.take(range(60))
