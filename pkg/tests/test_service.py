"""HTTP API behavior: routes, validation, persistence, training flow."""

from datetime import date, timedelta

import numpy as np
import pytest
from fastapi.testclient import TestClient

from borderflow.ingest import (
    FILLED,
    MISSING,
    OBSERVED,
    IndicatorSeries,
    build_panel,
    export_panel_csv,
)
from borderflow.service.app import create_app
from borderflow.service.config import ServiceConfig
from borderflow.service.store import DEFAULT_RANGES
from borderflow.synthetic import SyntheticSpec, make_synthetic_dataset

START = date(2022, 1, 1)


@pytest.fixture()
def client(tmp_path):
    config = ServiceConfig(data_dir=tmp_path / "data")
    return TestClient(create_app(config))


def params_body(**over):
    base = dict(
        latent_demand=500.0,
        arrival_rate=500.0,
        registration_capacity=300.0,
        special_needs_fraction=0.3,
        extra_shelter_requests=0.0,
        relocation_capacity=0.0,
        horizon=10,
    )
    base.update(over)
    return base


def test_healthz(client):
    resp = client.get("/healthz")
    assert resp.status_code == 200
    assert resp.json()["status"] == "ok"


class TestSimulate:
    def test_registration_backlog_scenario(self, client):
        resp = client.post(
            "/v1/simulate",
            json={
                "params": params_body(),
                "initial": {"want_to_leave": 1e6, "at_border": 300.0},
            },
        )
        assert resp.status_code == 200
        doc = resp.json()
        at_border = doc["trace"]["occupancy"]["at_border"]
        # arrivals outpace registration by 200/day with the queue seeded
        # at exactly one day of registration capacity
        for day in range(10):
            assert at_border[day + 1] - at_border[day] == pytest.approx(200.0)
        assert doc["bottlenecks"][0]["stage"] == "at_border"
        assert doc["bottlenecks"][0]["growth_per_day"] == pytest.approx(200.0)
        assert doc["overflow"] is None

    def test_idle_scenario_changes_nothing(self, client):
        resp = client.post(
            "/v1/simulate",
            json={
                "params": params_body(
                    latent_demand=0, arrival_rate=0, registration_capacity=0,
                    special_needs_fraction=0, horizon=5,
                ),
                "initial": {"sheltered": 100.0},
            },
        )
        doc = resp.json()
        assert doc["trace"]["occupancy"]["sheltered"] == [100.0] * 6
        assert doc["bottlenecks"] == []
        assert all(f["amount"] == 0.0 for f in doc["trace"]["flows"])

    def test_overflow_and_triggers_reported(self, client):
        resp = client.post(
            "/v1/simulate",
            json={
                "params": params_body(
                    arrival_rate=1000, registration_capacity=1000,
                    special_needs_fraction=1.0, latent_demand=1000,
                    shelter_capacity=1500.0, horizon=10,
                ),
                "initial": {"want_to_leave": 1e6},
                "rules": [
                    {"rule_id": "shelter-alert", "metric": "sheltered", "threshold": 2000.0}
                ],
            },
        )
        doc = resp.json()
        assert doc["overflow"] is not None
        assert doc["overflow"]["peak_exceedance"] > 0
        (trigger,) = doc["triggers"]
        assert trigger["rule_id"] == "shelter-alert"
        sheltered = doc["trace"]["occupancy"]["sheltered"]
        assert sheltered[trigger["day"]] > 2000.0
        assert all(v <= 2000.0 for v in sheltered[: trigger["day"]])

    def test_invalid_fraction_names_the_field(self, client):
        resp = client.post(
            "/v1/simulate",
            json={"params": params_body(special_needs_fraction=1.5)},
        )
        assert resp.status_code == 422
        locs = [tuple(e["loc"]) for e in resp.json()["detail"]]
        assert ("body", "params", "special_needs_fraction") in locs

    def test_unknown_stage_in_initial(self, client):
        resp = client.post(
            "/v1/simulate",
            json={"params": params_body(), "initial": {"queueing": 5.0}},
        )
        assert resp.status_code == 422
        assert "unknown stage" in resp.text

    def test_unknown_param_rejected(self, client):
        resp = client.post(
            "/v1/simulate",
            json={"params": params_body(arrivalrate=5.0)},
        )
        assert resp.status_code == 422

    def test_malformed_json_is_400(self, client):
        resp = client.post(
            "/v1/simulate",
            content="{not json",
            headers={"Content-Type": "application/json"},
        )
        assert resp.status_code == 400

    def test_identical_requests_identical_bytes(self, client):
        body = {
            "params": params_body(special_needs_fraction=0.37, horizon=50),
            "initial": {"want_to_leave": 12345.678, "processing": 90.1},
        }
        r1 = client.post("/v1/simulate", json=body)
        r2 = client.post("/v1/simulate", json=body)
        assert r1.content == r2.content


class TestSensitivity:
    def test_sweep_ordered_and_monotone(self, client):
        resp = client.post(
            "/v1/sensitivity",
            json={
                "base": params_body(
                    latent_demand=400, extra_shelter_requests=50, horizon=30
                ),
                "param": "relocation_capacity",
                "grid": [0.0, 100.0, 200.0],
                "snapshot_day": 30,
                "initial": {"sheltered": 500.0},
            },
        )
        assert resp.status_code == 200
        doc = resp.json()
        assert doc["param"] == "relocation_capacity"
        assert [s["value"] for s in doc["series"]] == [0.0, 100.0, 200.0]
        for a, b in zip(doc["series"], doc["series"][1:]):
            assert all(
                hi >= lo for hi, lo in zip(a["sheltered"], b["sheltered"])
            )  # more relocation never means more shelter load
        points = doc["snapshot"]["points"]
        assert [p["value"] for p in points] == [0.0, 100.0, 200.0]
        for p, s in zip(points, doc["series"]):
            assert p["sheltered"] == s["sheltered"][30]

    def test_snapshot_beyond_horizon(self, client):
        resp = client.post(
            "/v1/sensitivity",
            json={
                "base": params_body(horizon=10),
                "param": "relocation_capacity",
                "grid": [0.0],
                "snapshot_day": 11,
            },
        )
        assert resp.status_code == 422
        assert resp.json()["detail"][0]["loc"] == ["body", "snapshot_day"]

    def test_unknown_param(self, client):
        resp = client.post(
            "/v1/sensitivity",
            json={"base": params_body(), "param": "horizon", "grid": [5.0]},
        )
        assert resp.status_code == 422
        assert resp.json()["detail"][0]["loc"] == ["body", "param"]


def seed_panel(data_dir, days=160, seed=3):
    """Write a panel built from the synthetic indicators to the data dir."""
    arrivals, indicators = make_synthetic_dataset(SyntheticSpec(days=days, seed=seed))
    series_list = [
        IndicatorSeries(
            source_id=sid,
            start=s.start,
            values=s.values,
            flags=tuple([OBSERVED] * len(s.values)),
        )
        for sid, s in indicators.items()
    ]
    data_dir.mkdir(parents=True, exist_ok=True)
    export_panel_csv(build_panel(series_list), data_dir / "panel.csv")
    return arrivals


def train_body(arrivals, **over):
    body = {
        "arrivals": {
            "name": "arrivals",
            "start": arrivals.start.isoformat(),
            "values": [float(v) for v in arrivals.values],
        },
        "n_test": 30,
        "seed": 0,
        "bootstrap": {"replicates": 200, "level": 0.8, "seed": 0},
        "future_days": 5,
    }
    body.update(over)
    return body


class TestTrainFlow:
    def test_latest_is_404_before_training(self, client):
        resp = client.get("/v1/forecast/latest")
        assert resp.status_code == 404
        assert resp.json()["detail"] == "no trained ensemble"

    def test_train_without_panel_is_404(self, client, tmp_path):
        arrivals, _ = make_synthetic_dataset(SyntheticSpec(days=160, seed=3))
        resp = client.post("/v1/forecast/train", json=train_body(arrivals))
        assert resp.status_code == 404
        assert resp.json()["detail"] == "no ingested indicator panel"

    def test_train_then_latest(self, client):
        arrivals = seed_panel(client.app.state.config.data_dir)
        resp = client.post("/v1/forecast/train", json=train_body(arrivals))
        assert resp.status_code == 200
        doc = resp.json()
        assert doc["run_id"]
        models = [m["model"] for m in doc["metrics"]]
        assert models == [
            "ridge", "lasso", "decision_tree", "random_forest",
            "gradient_boosting", "historical_mean",
        ]
        assert sum(doc["weights"].values()) == pytest.approx(1.0)

        latest = client.get("/v1/forecast/latest")
        assert latest.status_code == 200
        fc = latest.json()
        assert fc["run_id"] == doc["run_id"]
        assert len(fc["dates"]) == 30 + 5  # test window plus future days
        assert fc["truth"][-5:] == [None] * 5  # future days have no labels
        assert all(v is not None for v in fc["truth"][:-5])
        for lo, pt, up in zip(fc["lower"], fc["point"], fc["upper"]):
            assert lo <= pt <= up

    def test_retraining_same_seed_reproduces_forecast(self, client):
        arrivals = seed_panel(client.app.state.config.data_dir)
        body = train_body(arrivals)
        r1 = client.post("/v1/forecast/train", json=body)
        f1 = client.get("/v1/forecast/latest").json()
        r2 = client.post("/v1/forecast/train", json=body)
        f2 = client.get("/v1/forecast/latest").json()
        assert r1.json()["run_id"] != r2.json()["run_id"]
        assert f1["point"] == f2["point"]
        assert f1["lower"] == f2["lower"]
        assert f1["upper"] == f2["upper"]
        assert f1["weights"] == f2["weights"]

    def test_unknown_indicator_column(self, client):
        arrivals = seed_panel(client.app.state.config.data_dir)
        resp = client.post(
            "/v1/forecast/train",
            json=train_body(arrivals, indicators=["nope"]),
        )
        assert resp.status_code == 422
        assert "panel has no columns: nope" in resp.text

    def test_busy_training_slot_is_409(self, client):
        arrivals = seed_panel(client.app.state.config.data_dir)
        client.app.state.training_lock.acquire()
        try:
            resp = client.post("/v1/forecast/train", json=train_body(arrivals))
            assert resp.status_code == 409
            assert resp.json()["detail"] == "training already in progress"
        finally:
            client.app.state.training_lock.release()


class TestIndicators:
    def seed_hand_panel(self, data_dir):
        n = 10
        aid = IndicatorSeries(
            source_id="aid",
            start=START,
            values=np.arange(10.0, 10.0 + n),
            flags=tuple([OBSERVED] * n),
        )
        fx = IndicatorSeries(
            source_id="fx",
            start=START,
            values=np.full(n, 5.0),
            flags=tuple([OBSERVED] * n),
        )
        gap_flags = [OBSERVED, OBSERVED, FILLED] + [MISSING] * 5 + [OBSERVED] * 2
        gap_values = np.array([1.0, 2.0, 2.0] + [np.nan] * 5 + [3.0, 4.0])
        gap = IndicatorSeries(
            source_id="gap", start=START, values=gap_values, flags=tuple(gap_flags)
        )
        data_dir.mkdir(parents=True, exist_ok=True)
        export_panel_csv(build_panel([aid, fx, gap]), data_dir / "panel.csv")

    def test_full_window_normalized(self, client):
        self.seed_hand_panel(client.app.state.config.data_dir)
        resp = client.get("/v1/indicators?window=2022-01-01:2022-01-10")
        assert resp.status_code == 200
        doc = resp.json()
        assert doc["window"] == {"start": "2022-01-01", "end": "2022-01-10"}
        by_id = {s["id"]: s for s in doc["series"]}
        assert list(by_id) == ["aid", "fx", "gap"]  # panel column order
        aid = by_id["aid"]
        assert aid["values"][0] == 0.0 and aid["values"][-1] == 1.0
        assert aid["mask"] == [OBSERVED] * 10
        assert by_id["fx"]["degenerate"] is True
        assert set(by_id["fx"]["values"]) == {0.5}
        gap = by_id["gap"]
        assert gap["values"][3] is None  # missing days stay gaps
        assert gap["mask"][2] == FILLED

    def test_window_slice_rescales_to_slice_extremes(self, client):
        self.seed_hand_panel(client.app.state.config.data_dir)
        resp = client.get("/v1/indicators?window=2022-01-03:2022-01-06")
        aid = {s["id"]: s for s in resp.json()["series"]}["aid"]
        # slice values 12..15 normalize against their own min and max
        assert aid["values"] == [0.0, pytest.approx(1 / 3), pytest.approx(2 / 3), 1.0]

    def test_window_with_nothing_observed(self, client):
        self.seed_hand_panel(client.app.state.config.data_dir)
        resp = client.get("/v1/indicators?window=2022-01-04:2022-01-08")
        gap = {s["id"]: s for s in resp.json()["series"]}["gap"]
        assert gap["values"] == [None] * 5
        assert gap["degenerate"] is False

    def test_window_beyond_panel_is_empty_echo(self, client):
        self.seed_hand_panel(client.app.state.config.data_dir)
        resp = client.get("/v1/indicators?window=2023-01-01:2023-01-05")
        assert resp.status_code == 200
        doc = resp.json()
        assert doc["window"] == {"start": "2023-01-01", "end": "2023-01-05"}
        assert all(s["values"] == [] and s["start"] is None for s in doc["series"])

    def test_bad_window_format(self, client):
        self.seed_hand_panel(client.app.state.config.data_dir)
        resp = client.get("/v1/indicators?window=2022-01-01")
        assert resp.status_code == 422
        assert resp.json()["detail"][0]["loc"] == ["query", "window"]
        resp = client.get("/v1/indicators?window=2022-01-09:2022-01-01")
        assert resp.status_code == 422

    def test_no_panel_is_404(self, client):
        resp = client.get("/v1/indicators?window=2022-01-01:2022-01-10")
        assert resp.status_code == 404


class TestScenarios:
    def test_default_scenario_seeded(self, client):
        resp = client.get("/v1/scenarios")
        docs = resp.json()["scenarios"]
        assert [d["scenario_id"] for d in docs] == ["default"]
        default = docs[0]
        assert default["ranges"] == {
            k: {kk: pytest.approx(vv) for kk, vv in v.items()}
            for k, v in DEFAULT_RANGES.items()
        }
        assert default["params"]["shelter_capacity"] == 5000.0
        assert default["initial"]["want_to_leave"] == 10000.0

    def test_create_get_run_round_trip(self, client):
        created = client.post(
            "/v1/scenarios",
            json={
                "name": "surge drill",
                "params": params_body(horizon=20),
                "initial": {"want_to_leave": 50000.0, "at_border": 300.0},
            },
        )
        assert created.status_code == 200
        scenario_id = created.json()["scenario_id"]
        assert scenario_id  # server assigned an id

        fetched = client.get(f"/v1/scenarios/{scenario_id}")
        assert fetched.json()["name"] == "surge drill"

        run = client.post(
            f"/v1/scenarios/{scenario_id}/run",
            json={"rules": [{"rule_id": "r1", "metric": "at_border", "threshold": 1000.0}]},
        )
        assert run.status_code == 200
        doc = run.json()
        assert doc["scenario_id"] == scenario_id
        assert doc["trace"]["occupancy"]["at_border"][0] == 300.0
        assert doc["triggers"][0]["rule_id"] == "r1"

        replay = client.get(f"/v1/runs/{doc['run_id']}")
        assert replay.status_code == 200
        assert replay.json()["trace"] == doc["trace"]

    def test_duplicate_id_conflicts(self, client):
        body = {
            "scenario_id": "winter",
            "name": "winter plan",
            "params": params_body(),
        }
        assert client.post("/v1/scenarios", json=body).status_code == 200
        resp = client.post("/v1/scenarios", json=body)
        assert resp.status_code == 409
        assert "already exists" in resp.json()["detail"]

    def test_unknown_ids_are_404(self, client):
        assert client.get("/v1/scenarios/ghost").status_code == 404
        assert client.post("/v1/scenarios/ghost/run", json={}).status_code == 404
        assert client.get("/v1/runs/ghost").status_code == 404

    def test_custom_ranges_validated(self, client):
        resp = client.post(
            "/v1/scenarios",
            json={
                "name": "bad ranges",
                "params": params_body(),
                "ranges": {
                    "latent_demand": {"min": 0, "max": 10, "step": 1, "default": 99}
                },
            },
        )
        assert resp.status_code == 422
        assert "default outside min..max" in resp.text
