"""Run-directory artifacts: manifest, estimator blobs, forecast files."""

import csv
import json

import numpy as np
import pytest

from borderflow.forecasting.artifacts import (
    ARTIFACT_VERSION,
    ArtifactError,
    export_forecast_csv,
    forecast_from_doc,
    forecast_to_doc,
    load_forecast,
    load_manifest,
    load_models,
    save_run,
)
from borderflow.forecasting.bootstrap import BootstrapConfig
from borderflow.forecasting.cv import CvConfig
from borderflow.forecasting.models import BASELINE_KIND, ModelSpec, predict
from borderflow.forecasting.train import train_ensemble

REGISTRY = [
    ModelSpec("ridge", ({"alpha": 0.1}, {"alpha": 10.0})),
    ModelSpec("decision_tree", ({"max_depth": 2},)),
]


@pytest.fixture(scope="module")
def trained(small_matrix):
    return train_ensemble(
        small_matrix,
        n_test=20,
        registry=REGISTRY,
        cv=CvConfig(10),
        bootstrap=BootstrapConfig(replicates=200, seed=0),
        seed=0,
    )


@pytest.fixture(scope="module")
def run_dir(trained, tmp_path_factory):
    d = tmp_path_factory.mktemp("runs") / "run1"
    save_run(d, trained)
    return d


def test_run_directory_layout(run_dir):
    names = {p.name for p in run_dir.iterdir()}
    assert "manifest.json" in names
    assert "forecast.json" in names
    assert "forecast.csv" in names
    assert "ridge.joblib" in names
    assert "decision_tree.joblib" in names
    assert f"{BASELINE_KIND}.joblib" in names


def test_manifest_contents(run_dir, trained):
    manifest = load_manifest(run_dir)
    assert manifest["version"] == ARTIFACT_VERSION
    assert manifest["weight_rule"] == "inverse_rmse"
    assert manifest["weights"] == trained.weights
    kinds = [e["kind"] for e in manifest["models"]]
    assert kinds == ["ridge", "decision_tree"]
    ridge_entry = manifest["models"][0]
    # linear coefficients are inlined so runs are auditable without unpickling
    coef = ridge_entry["coefficients"]
    assert set(coef["by_feature"]) == set(trained.models["ridge"].feature_names)
    assert manifest["baseline"]["kind"] == BASELINE_KIND
    assert [m["model"] for m in manifest["metrics"]] == [
        "ridge", "decision_tree", BASELINE_KIND,
    ]


def test_reloaded_models_predict_identically(run_dir, trained, small_matrix):
    models, baseline = load_models(run_dir)
    rows = small_matrix.rows
    for kind, original in trained.models.items():
        reloaded = models[kind]
        assert reloaded.hyperparams == original.hyperparams
        assert reloaded.train_range == original.train_range
        assert np.array_equal(predict(reloaded, rows), predict(original, rows))
    assert np.array_equal(predict(baseline, rows), predict(trained.baseline, rows))


def test_forecast_json_round_trip(trained):
    doc = forecast_to_doc(trained.forecast)
    back = forecast_from_doc(json.loads(json.dumps(doc)))
    assert back.dates == trained.forecast.dates
    assert back.weights == trained.forecast.weights
    assert np.array_equal(back.point, trained.forecast.point)
    assert np.array_equal(back.truth, trained.forecast.truth, equal_nan=True)


def test_forecast_reload_from_run(run_dir, trained):
    back = load_forecast(run_dir)
    assert np.array_equal(back.point, trained.forecast.point)
    assert np.array_equal(back.lower, trained.forecast.lower)
    assert np.array_equal(back.upper, trained.forecast.upper)


def test_forecast_csv_shape(run_dir, trained):
    with open(run_dir / "forecast.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == [
        "date", "truth", "decision_tree", "ridge", "ensemble", "lower", "upper",
    ]
    assert len(rows) == 1 + len(trained.forecast.dates)
    first = rows[1]
    assert first[0] == trained.forecast.dates[0].isoformat()
    assert float(first[5]) <= float(first[4]) <= float(first[6])


def test_nan_truth_becomes_empty_cell(tmp_path, trained, small_matrix):
    from dataclasses import replace

    fc = trained.forecast
    truth = fc.truth.copy()
    truth[-1] = np.nan
    fc = replace(fc, truth=truth)
    export_forecast_csv(fc, tmp_path / "f.csv")
    with open(tmp_path / "f.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[-1][1] == ""


def test_missing_manifest(tmp_path):
    with pytest.raises(ArtifactError, match="no manifest"):
        load_manifest(tmp_path)


def test_version_check(tmp_path):
    (tmp_path / "manifest.json").write_text(json.dumps({"version": 99}))
    with pytest.raises(ArtifactError, match="unsupported artifact version"):
        load_manifest(tmp_path)


def test_missing_blob_detected(run_dir, tmp_path):
    import shutil

    broken = tmp_path / "broken"
    shutil.copytree(run_dir, broken)
    (broken / "ridge.joblib").unlink()
    with pytest.raises(ArtifactError, match="missing estimator blob"):
        load_models(broken)
