"""Generate a self-contained demo workspace.

Writes daily arrivals, two indicator files (with a deliberate duplicate
row and a reporting gap so ingestion has something to clean up), a TOML
source registry, and a planning scenario. Point the CLI at the result:

    python3 scripts/make_fixtures.py --out demo
    borderflow ingest --sources demo/sources.toml \
        --start 2021-07-26 --end 2022-07-13 --out-dir demo/data
"""

import argparse
import csv
from datetime import timedelta
from pathlib import Path

from borderflow.pipeline import PipelineState, ScenarioParams
from borderflow.scenario_io import write_scenario
from borderflow.synthetic import SyntheticSpec, make_synthetic_dataset

SOURCES_TOML = """\
[[source]]
id = "help_requests"
name = "Hotline help requests"
file = "help_requests.csv"
frequency = "daily"
value_column = "requests"
units = "calls/day"

[[source]]
id = "fuel_price"
name = "Retail fuel price"
file = "fuel_price.csv"
frequency = "daily"
value_column = "price"
units = "eur/l"
"""


def write_series_csv(path, series, column, skip_days=(), duplicate_day=None):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["date", column])
        for i, value in enumerate(series.values):
            if i in skip_days:
                continue
            day = (series.start + timedelta(days=i)).isoformat()
            writer.writerow([day, str(round(float(value), 3))])
            if i == duplicate_day:
                # same date reported twice; the later (revised) row wins
                writer.writerow([day, str(round(float(value) + 1.0, 3))])


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="demo", help="output directory")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    arrivals, indicators = make_synthetic_dataset(SyntheticSpec(seed=args.seed))
    write_series_csv(out / "arrivals.csv", arrivals, "value")
    write_series_csv(
        out / "help_requests.csv",
        indicators["help_requests"],
        "requests",
        skip_days=(40, 41, 42),  # a three-day reporting outage
        duplicate_day=10,
    )
    write_series_csv(out / "fuel_price.csv", indicators["fuel_price"], "price")
    (out / "sources.toml").write_text(SOURCES_TOML, encoding="utf-8")

    write_scenario(
        out / "scenario.toml",
        ScenarioParams(
            latent_demand=500.0,
            arrival_rate=500.0,
            registration_capacity=300.0,
            special_needs_fraction=0.3,
            extra_shelter_requests=50.0,
            relocation_capacity=100.0,
            shelter_capacity=1500.0,
            horizon=60,
        ),
        PipelineState.from_names(
            {"want_to_leave": 100000.0, "at_border": 300.0, "sheltered": 500.0}
        ),
    )

    end = arrivals.start + timedelta(days=len(arrivals.values) - 1)
    print(f"fixtures -> {out}/ (data span {arrivals.start} .. {end})")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
