"""Scenario files and tabular trace export.

A scenario file is a flat TOML document with the eight scenario
parameters at the top level and an optional ``[initial]`` table of
starting occupancies keyed by stage name. Unknown keys are rejected
rather than ignored so typos fail loudly.
"""

from __future__ import annotations

import csv
import sys
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .pipeline import (
    ParameterError,
    PipelineState,
    ScenarioParams,
    SimulationTrace,
    Stage,
)


class ScenarioFormatError(ValueError):
    """A scenario file is structurally wrong (bad keys, bad types)."""


_PARAM_KEYS = ScenarioParams.field_names()
_STAGE_NAMES = tuple(stage.value for stage in Stage)


def parse_scenario(doc: dict) -> tuple[ScenarioParams, PipelineState]:
    unknown = sorted(set(doc) - set(_PARAM_KEYS) - {"initial"})
    if unknown:
        raise ScenarioFormatError(f"unknown scenario keys: {', '.join(unknown)}")

    kwargs = {}
    for key in _PARAM_KEYS:
        if key not in doc:
            continue
        value = doc[key]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ScenarioFormatError(f"{key} must be a number, got {value!r}")
        kwargs[key] = int(value) if key == "horizon" else float(value)
    params = ScenarioParams(**kwargs)
    try:
        params.validate()
    except ParameterError as exc:
        raise ScenarioFormatError(str(exc)) from exc

    initial_doc = doc.get("initial", {})
    if not isinstance(initial_doc, dict):
        raise ScenarioFormatError("initial must be a table of stage occupancies")
    bad_stages = sorted(set(initial_doc) - set(_STAGE_NAMES))
    if bad_stages:
        raise ScenarioFormatError(f"unknown stage names in initial: {', '.join(bad_stages)}")
    occupancy = {}
    for name, value in initial_doc.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ScenarioFormatError(f"initial.{name} must be a number, got {value!r}")
        occupancy[name] = float(value)
    initial = PipelineState.from_names(occupancy)
    try:
        initial.validate()
    except ValueError as exc:
        raise ScenarioFormatError(str(exc)) from exc
    return params, initial


def load_scenario(path: str | Path) -> tuple[ScenarioParams, PipelineState]:
    raw = Path(path).read_bytes()
    try:
        doc = tomllib.loads(raw.decode("utf-8"))
    except (tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
        raise ScenarioFormatError(f"{path}: {exc}") from exc
    return parse_scenario(doc)


def write_scenario(
    path: str | Path, params: ScenarioParams, initial: PipelineState | None = None
) -> None:
    """Write a scenario back out as flat TOML (used by fixtures and demos)."""
    lines = []
    for key in _PARAM_KEYS:
        value = getattr(params, key)
        if value is None:
            continue
        lines.append(f"{key} = {value}")
    if initial is not None:
        nonzero = {
            stage.value: occ for stage, occ in initial.occupancy.items() if occ != 0.0
        }
        if nonzero:
            lines.append("")
            lines.append("[initial]")
            for name, occ in nonzero.items():
                lines.append(f"{name} = {occ}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def occupancy_rows(trace: SimulationTrace) -> list[tuple[int, str, float]]:
    """Long-form (day, stage, occupancy) rows, days ascending, stage order fixed."""
    rows = []
    for state in trace.states:
        for stage in Stage:
            rows.append((state.day, stage.value, state.occupancy[stage]))
    return rows


def flow_rows(trace: SimulationTrace) -> list[tuple[int, str, str, float]]:
    return [(f.day, f.source.value, f.dest.value, f.amount) for f in trace.flows]


def export_occupancy_csv(trace: SimulationTrace, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["day", "stage", "occupancy"])
        for day, stage, occ in occupancy_rows(trace):
            writer.writerow([day, stage, str(occ)])


def export_flows_csv(trace: SimulationTrace, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["day", "source", "dest", "amount"])
        for day, source, dest, amount in flow_rows(trace):
            writer.writerow([day, source, dest, str(amount)])
