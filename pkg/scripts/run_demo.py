"""Drive the whole toolkit end to end on generated fixtures.

Equivalent to running the documented CLI by hand:
fixtures -> ingest -> train -> predict, then a scenario simulation and
a relocation-capacity sweep. Everything lands under the --out directory.
"""

import argparse
import subprocess
import sys
from pathlib import Path

HERE = Path(__file__).parent


def run(argv):
    print("$", " ".join(argv))
    proc = subprocess.run(argv)
    if proc.returncode != 0:
        raise SystemExit(proc.returncode)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="demo")
    parser.add_argument("--replicates", type=int, default=1000)
    args = parser.parse_args()
    out = Path(args.out)

    run([sys.executable, str(HERE / "make_fixtures.py"), "--out", str(out)])
    cli = [sys.executable, "-m", "borderflow.cli"]
    run(cli + [
        "ingest", "--sources", str(out / "sources.toml"),
        "--start", "2021-07-26", "--end", "2022-07-13",
        "--out-dir", str(out / "data"),
    ])
    run(cli + [
        "train", "--panel", str(out / "data" / "panel.csv"),
        "--arrivals", str(out / "arrivals.csv"),
        "--out-dir", str(out / "run"),
        "--replicates", str(args.replicates), "--future-days", "14",
    ])
    run(cli + [
        "predict", "--run-dir", str(out / "run"),
        "--out", str(out / "forecast.csv"),
    ])
    run(cli + [
        "simulate", "--scenario", str(out / "scenario.toml"),
        "--out", str(out / "occupancy.csv"),
        "--flows-out", str(out / "flows.csv"),
    ])
    run(cli + [
        "sweep", "--scenario", str(out / "scenario.toml"),
        "--param", "relocation_capacity", "--grid", "0,50,100,150,200,250,300",
        "--snapshot-day", "60", "--out", str(out / "sweep.csv"),
    ])
    print(f"demo artifacts -> {out}/")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
