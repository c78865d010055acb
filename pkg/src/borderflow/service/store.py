"""Single-file SQLite persistence for scenarios and simulation runs.

Scenario documents carry slider range metadata alongside the parameter
values so a UI can lay out its controls straight from the server.
"""

from __future__ import annotations

import json
import sqlite3
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from ..pipeline import ParameterError, PipelineState, ScenarioParams, Stage

#: Default slider layout per planner parameter: min, max, step, default.
DEFAULT_RANGES: dict[str, dict[str, float]] = {
    "latent_demand": {"min": 0, "max": 2000, "step": 10, "default": 400},
    "arrival_rate": {"min": 0, "max": 2000, "step": 10, "default": 500},
    "registration_capacity": {"min": 0, "max": 2000, "step": 10, "default": 300},
    "special_needs_fraction": {"min": 0, "max": 1, "step": 0.01, "default": 0.3},
    "extra_shelter_requests": {"min": 0, "max": 500, "step": 5, "default": 50},
    "relocation_capacity": {"min": 0, "max": 1000, "step": 10, "default": 100},
}


class StoreError(ValueError):
    """A scenario or run document is invalid or missing."""


@dataclass
class ScenarioDocument:
    """A named, persistable scenario with UI range metadata."""

    scenario_id: str
    name: str
    params: ScenarioParams
    initial: PipelineState
    ranges: dict[str, dict[str, float]] = field(default_factory=lambda: {
        k: dict(v) for k, v in DEFAULT_RANGES.items()
    })
    created: str = ""

    def validate(self) -> None:
        if not self.scenario_id:
            raise StoreError("scenario_id must be non-empty")
        if not self.name:
            raise StoreError("name must be non-empty")
        try:
            self.params.validate()
            self.initial.validate()
        except ValueError as exc:
            raise StoreError(str(exc)) from exc
        for param, rng in self.ranges.items():
            if param not in DEFAULT_RANGES:
                raise StoreError(f"ranges: unknown parameter {param!r}")
            missing = {"min", "max", "step", "default"} - set(rng)
            if missing:
                raise StoreError(f"ranges.{param}: missing {sorted(missing)}")
            if not rng["min"] <= rng["default"] <= rng["max"]:
                raise StoreError(f"ranges.{param}: default outside min..max")
            if rng["step"] <= 0:
                raise StoreError(f"ranges.{param}: step must be > 0")

    def to_doc(self) -> dict:
        return {
            "scenario_id": self.scenario_id,
            "name": self.name,
            "params": {
                k: getattr(self.params, k)
                for k in ScenarioParams.field_names()
                if getattr(self.params, k) is not None
            },
            "initial": {s.value: occ for s, occ in self.initial.occupancy.items()},
            "ranges": self.ranges,
            "created": self.created,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "ScenarioDocument":
        params = ScenarioParams(**doc["params"])
        initial = PipelineState.from_names(doc.get("initial", {}))
        return cls(
            scenario_id=doc["scenario_id"],
            name=doc["name"],
            params=params,
            initial=initial,
            ranges=doc.get("ranges", {k: dict(v) for k, v in DEFAULT_RANGES.items()}),
            created=doc.get("created", ""),
        )


class Store:
    """Scenarios and run results in one SQLite file."""

    def __init__(self, path: str | Path) -> None:
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._conn = sqlite3.connect(self.path, check_same_thread=False)
        self._conn.execute(
            "CREATE TABLE IF NOT EXISTS scenarios ("
            " id TEXT PRIMARY KEY, name TEXT NOT NULL, doc TEXT NOT NULL,"
            " created TEXT NOT NULL)"
        )
        self._conn.execute(
            "CREATE TABLE IF NOT EXISTS runs ("
            " id TEXT PRIMARY KEY, scenario_id TEXT NOT NULL, doc TEXT NOT NULL,"
            " created TEXT NOT NULL,"
            " FOREIGN KEY (scenario_id) REFERENCES scenarios (id))"
        )
        self._conn.commit()

    def close(self) -> None:
        self._conn.close()

    def save_scenario(self, doc: ScenarioDocument) -> ScenarioDocument:
        if not doc.scenario_id:
            doc.scenario_id = uuid.uuid4().hex
        if not doc.created:
            doc.created = datetime.now(timezone.utc).isoformat()
        doc.validate()
        existing = self._conn.execute(
            "SELECT 1 FROM scenarios WHERE id = ?", (doc.scenario_id,)
        ).fetchone()
        if existing:
            raise StoreError(f"scenario id already exists: {doc.scenario_id}")
        self._conn.execute(
            "INSERT INTO scenarios (id, name, doc, created) VALUES (?, ?, ?, ?)",
            (doc.scenario_id, doc.name, json.dumps(doc.to_doc()), doc.created),
        )
        self._conn.commit()
        return doc

    def get_scenario(self, scenario_id: str) -> ScenarioDocument:
        row = self._conn.execute(
            "SELECT doc FROM scenarios WHERE id = ?", (scenario_id,)
        ).fetchone()
        if row is None:
            raise StoreError(f"no scenario with id {scenario_id!r}")
        return ScenarioDocument.from_doc(json.loads(row[0]))

    def list_scenarios(self) -> list[ScenarioDocument]:
        rows = self._conn.execute(
            "SELECT doc FROM scenarios ORDER BY created, id"
        ).fetchall()
        return [ScenarioDocument.from_doc(json.loads(r[0])) for r in rows]

    def save_run(self, scenario_id: str, doc: dict) -> str:
        self.get_scenario(scenario_id)  # referential check
        run_id = uuid.uuid4().hex
        created = datetime.now(timezone.utc).isoformat()
        self._conn.execute(
            "INSERT INTO runs (id, scenario_id, doc, created) VALUES (?, ?, ?, ?)",
            (run_id, scenario_id, json.dumps(doc), created),
        )
        self._conn.commit()
        return run_id

    def get_run(self, run_id: str) -> dict:
        row = self._conn.execute("SELECT doc FROM runs WHERE id = ?", (run_id,)).fetchone()
        if row is None:
            raise StoreError(f"no run with id {run_id!r}")
        return json.loads(row[0])

    def seed_default_scenario(self) -> ScenarioDocument:
        """Install a starting scenario if the store is empty."""
        if self.list_scenarios():
            return self.list_scenarios()[0]
        defaults = {k: v["default"] for k, v in DEFAULT_RANGES.items()}
        doc = ScenarioDocument(
            scenario_id="default",
            name="Baseline planning scenario",
            params=ScenarioParams(
                latent_demand=float(defaults["latent_demand"]),
                arrival_rate=float(defaults["arrival_rate"]),
                registration_capacity=float(defaults["registration_capacity"]),
                special_needs_fraction=float(defaults["special_needs_fraction"]),
                extra_shelter_requests=float(defaults["extra_shelter_requests"]),
                relocation_capacity=float(defaults["relocation_capacity"]),
                shelter_capacity=5000.0,
                horizon=30,
            ),
            initial=PipelineState.from_names(
                {"want_to_leave": 10000.0, "at_border": 300.0, "sheltered": 500.0}
            ),
        )
        return self.save_scenario(doc)
