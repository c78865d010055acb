"""Capture live API responses as golden fixtures for the web UI tests.

Spins up the service in-process against a temp data directory, seeds the
indicator panel from the synthetic dataset, trains a small ensemble, then
records request/response pairs for every endpoint the UI consumes. The
UI test suite replays these files and checks its chart models against the
recorded response fields, so the fixtures must be regenerated whenever a
response shape changes:

    python3 scripts/export_ui_fixtures.py
"""

from __future__ import annotations

import argparse
import json
import tempfile
from pathlib import Path

from datetime import date, timedelta

from fastapi.testclient import TestClient

from borderflow.ingest import (
    OBSERVED,
    IndicatorSeries,
    IndicatorSource,
    RawRecord,
    align_daily,
    build_panel,
    export_panel_csv,
)
from borderflow.service.app import create_app
from borderflow.service.config import ServiceConfig
from borderflow.synthetic import SyntheticSpec, make_synthetic_dataset

SIMULATE_BODY = {
    "params": {
        "latent_demand": 400.0,
        "arrival_rate": 500.0,
        "registration_capacity": 300.0,
        "special_needs_fraction": 0.3,
        "extra_shelter_requests": 50.0,
        "relocation_capacity": 40.0,
        "shelter_capacity": 1500.0,
        "horizon": 60,
    },
    "initial": {"want_to_leave": 100000.0, "at_border": 300.0, "sheltered": 500.0},
    "rules": [
        {"rule_id": "shelter-surge", "metric": "sheltered", "threshold": 2000.0, "label": ""}
    ],
}

SENSITIVITY_BODY = {
    "base": {k: v for k, v in SIMULATE_BODY["params"].items()},
    "param": "relocation_capacity",
    "grid": [0.0, 60.0, 120.0],
    "snapshot_day": 30,
    "initial": dict(SIMULATE_BODY["initial"]),
}

INDICATOR_WINDOW = "2021-09-01:2021-09-30"

# outage windows knocked out of help_requests so the recorded mask carries
# filled and missing cells, not just observed ones
SHORT_OUTAGE = (date(2021, 9, 5), date(2021, 9, 7))
LONG_OUTAGE = (date(2021, 9, 15), date(2021, 9, 26))


def _dropped(day: date) -> bool:
    return SHORT_OUTAGE[0] <= day <= SHORT_OUTAGE[1] or LONG_OUTAGE[0] <= day <= LONG_OUTAGE[1]


def seed_panel(data_dir: Path, days: int = 160, seed: int = 3):
    arrivals, indicators = make_synthetic_dataset(SyntheticSpec(days=days, seed=seed))
    span = (indicators["help_requests"].start, indicators["help_requests"].end)
    records = [
        RawRecord(day=d, value=float(v), source_id="help_requests")
        for i, v in enumerate(indicators["help_requests"].values)
        if not _dropped(d := indicators["help_requests"].start + timedelta(days=i))
    ]
    gapped = align_daily(
        records,
        IndicatorSource(
            source_id="help_requests", path="-", frequency="daily", value_column="requests"
        ),
        span,
    )
    fuel = indicators["fuel_price"]
    series_list = [
        IndicatorSeries(
            source_id="fuel_price",
            start=fuel.start,
            values=fuel.values,
            flags=tuple([OBSERVED] * len(fuel.values)),
        ),
        gapped,
    ]
    data_dir.mkdir(parents=True, exist_ok=True)
    export_panel_csv(build_panel(series_list), data_dir / "panel.csv")
    return arrivals


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--out",
        type=Path,
        default=Path(__file__).resolve().parent.parent / "frontend" / "tests" / "fixtures",
    )
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    with tempfile.TemporaryDirectory() as tmp:
        data_dir = Path(tmp) / "data"
        arrivals = seed_panel(data_dir)
        client = TestClient(create_app(ServiceConfig(data_dir=data_dir)))

        def save(name: str, doc: dict) -> None:
            (args.out / name).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
            print(f"wrote {args.out / name}")

        resp = client.get("/v1/scenarios/default")
        assert resp.status_code == 200, resp.text
        save("scenario_default.json", {"url": "/v1/scenarios/default", "response": resp.json()})

        resp = client.post("/v1/simulate", json=SIMULATE_BODY)
        assert resp.status_code == 200, resp.text
        doc = resp.json()
        # the shelter chart tests need all three report kinds populated
        assert doc["overflow"] is not None
        assert doc["triggers"] and doc["bottlenecks"]
        save("simulate.json", {"request": SIMULATE_BODY, "response": doc})

        resp = client.post("/v1/sensitivity", json=SENSITIVITY_BODY)
        assert resp.status_code == 200, resp.text
        save("sensitivity.json", {"request": SENSITIVITY_BODY, "response": resp.json()})

        train_body = {
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
        resp = client.post("/v1/forecast/train", json=train_body)
        assert resp.status_code == 200, resp.text
        resp = client.get("/v1/forecast/latest")
        assert resp.status_code == 200, resp.text
        doc = resp.json()
        # truth must run out before the forecast does (future region)
        assert doc["truth"][-1] is None
        save("forecast_latest.json", {"url": "/v1/forecast/latest", "response": doc})

        resp = client.get("/v1/indicators", params={"window": INDICATOR_WINDOW})
        assert resp.status_code == 200, resp.text
        doc = resp.json()
        masks = {s["id"]: set(s["mask"]) for s in doc["series"]}
        # the mask fixture must exercise all three flag kinds
        assert masks["help_requests"] == {"observed", "filled", "missing"}, masks
        assert masks["fuel_price"] == {"observed"}
        save(
            "indicators.json",
            {"url": f"/v1/indicators?window={INDICATOR_WINDOW}", "response": doc},
        )


if __name__ == "__main__":
    main()
