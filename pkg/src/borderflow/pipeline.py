"""Deterministic daily-step model of a border-crossing pipeline.

People sit in six pools: wanting to leave, waiting at the border,
undergoing registration and processing, sheltered, relocated inland,
and self-settled (processed cases that never request shelter). Daily
flows between pools are capped by planner-controlled capacities.
Relocated and self-settled are terminal: nothing ever leaves them.

Each step updates pools from the downstream end backwards, so nobody
advances more than one stage within a single day. Occupancies are
non-negative reals; parameters are average daily rates and fractional
people are a display concern, not a modelling one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from enum import Enum
from typing import Mapping, Sequence


class Stage(Enum):
    WANT_TO_LEAVE = "want_to_leave"
    AT_BORDER = "at_border"
    PROCESSING = "processing"
    SHELTERED = "sheltered"
    RELOCATED = "relocated"
    SELF_SETTLED = "self_settled"

    def __str__(self) -> str:  # CSV / JSON friendly
        return self.value


STAGES = tuple(Stage)
TERMINAL_STAGES = (Stage.RELOCATED, Stage.SELF_SETTLED)
NON_TERMINAL_STAGES = (
    Stage.WANT_TO_LEAVE,
    Stage.AT_BORDER,
    Stage.PROCESSING,
    Stage.SHELTERED,
)

#: Parameters a planner may vary one at a time in a sensitivity sweep.
SWEEPABLE_PARAMS = (
    "latent_demand",
    "arrival_rate",
    "registration_capacity",
    "special_needs_fraction",
    "extra_shelter_requests",
    "relocation_capacity",
)


class ParameterError(ValueError):
    """A rate, fraction, capacity, or horizon is outside its domain."""


class StateError(ValueError):
    """A pipeline state holds a negative or non-finite occupancy."""


def stage_from_name(name: str) -> Stage:
    try:
        return Stage(name)
    except ValueError:
        raise StateError(f"unknown stage name: {name!r}") from None


@dataclass(frozen=True, slots=True)
class ScenarioParams:
    """Planner-facing knobs for one simulated scenario.

    All rates are people per day. ``shelter_capacity`` is a reporting
    threshold only: it never constrains flows, it just defines when the
    sheltered pool counts as overflowing.
    """

    latent_demand: float = 0.0
    arrival_rate: float = 0.0
    registration_capacity: float = 0.0
    special_needs_fraction: float = 0.0
    extra_shelter_requests: float = 0.0
    relocation_capacity: float = 0.0
    shelter_capacity: float | None = None
    horizon: int = 30

    def validate(self) -> None:
        for name in SWEEPABLE_PARAMS:
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ParameterError(f"{name} must be a real number, got {value!r}")
            if not math.isfinite(value) or value < 0:
                raise ParameterError(f"{name} must be finite and >= 0, got {value!r}")
        if self.special_needs_fraction > 1:
            raise ParameterError(
                f"special_needs_fraction must be <= 1, got {self.special_needs_fraction!r}"
            )
        if self.shelter_capacity is not None:
            cap = self.shelter_capacity
            if not isinstance(cap, (int, float)) or isinstance(cap, bool):
                raise ParameterError(f"shelter_capacity must be a real number, got {cap!r}")
            if not math.isfinite(cap) or cap < 0:
                raise ParameterError(f"shelter_capacity must be finite and >= 0, got {cap!r}")
        if not isinstance(self.horizon, int) or isinstance(self.horizon, bool):
            raise ParameterError(f"horizon must be an integer, got {self.horizon!r}")
        if self.horizon < 1:
            raise ParameterError(f"horizon must be >= 1, got {self.horizon}")

    @classmethod
    def field_names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))


@dataclass(frozen=True, slots=True)
class PipelineState:
    """Occupancy of every stage at the start of a given day."""

    occupancy: Mapping[Stage, float]
    day: int = 0

    def __post_init__(self) -> None:
        # normalize to a plain dict covering all six stages
        occ = {stage: float(self.occupancy.get(stage, 0.0)) for stage in STAGES}
        object.__setattr__(self, "occupancy", occ)

    def validate(self) -> None:
        if self.day < 0:
            raise StateError(f"day must be >= 0, got {self.day}")
        for stage, value in self.occupancy.items():
            if not math.isfinite(value):
                raise StateError(f"{stage.value} occupancy is not finite: {value!r}")
            if value < 0:
                raise StateError(f"{stage.value} occupancy is negative: {value!r}")

    def total(self) -> float:
        return sum(self.occupancy.values())

    def __getitem__(self, stage: Stage) -> float:
        return self.occupancy[stage]

    @classmethod
    def zero(cls, day: int = 0) -> "PipelineState":
        return cls(occupancy={}, day=day)

    @classmethod
    def from_names(cls, occupancy: Mapping[str, float], day: int = 0) -> "PipelineState":
        converted = {stage_from_name(name): value for name, value in occupancy.items()}
        return cls(occupancy=converted, day=day)


@dataclass(frozen=True, slots=True)
class FlowRecord:
    """One directed movement of people during one day."""

    day: int  # day whose state this flow produced
    source: Stage
    dest: Stage
    amount: float


@dataclass(frozen=True, slots=True)
class SimulationTrace:
    """States for days 0..horizon plus every flow that happened."""

    states: tuple[PipelineState, ...]
    flows: tuple[FlowRecord, ...]

    @property
    def horizon(self) -> int:
        return len(self.states) - 1

    @property
    def days(self) -> tuple[int, ...]:
        return tuple(s.day for s in self.states)

    def series(self, stage: Stage) -> list[float]:
        return [s.occupancy[stage] for s in self.states]

    def final(self) -> PipelineState:
        return self.states[-1]


def step(state: PipelineState, params: ScenarioParams) -> tuple[PipelineState, list[FlowRecord]]:
    """Advance one day.

    Update order runs from the downstream end backwards so a person can
    cross at most one stage boundary per day:

    1. relocate up to ``relocation_capacity`` out of sheltered,
    2. empty processing: ``special_needs_fraction`` to sheltered, rest
       to self-settled,
    3. register up to ``registration_capacity`` from the border queue,
    4. let up to ``arrival_rate`` reach the border,
    5. add ``latent_demand`` to the wanting-to-leave pool,
    6. add ``extra_shelter_requests`` directly to sheltered.
    """
    params.validate()
    state.validate()

    occ = dict(state.occupancy)
    new_day = state.day + 1
    flows: list[FlowRecord] = []

    relocated = min(params.relocation_capacity, occ[Stage.SHELTERED])
    occ[Stage.SHELTERED] -= relocated
    occ[Stage.RELOCATED] += relocated
    flows.append(FlowRecord(new_day, Stage.SHELTERED, Stage.RELOCATED, relocated))

    processed = occ[Stage.PROCESSING]
    to_shelter = params.special_needs_fraction * processed
    to_self = processed - to_shelter  # exact complement keeps mass balanced
    occ[Stage.PROCESSING] = 0.0
    occ[Stage.SHELTERED] += to_shelter
    occ[Stage.SELF_SETTLED] += to_self
    flows.append(FlowRecord(new_day, Stage.PROCESSING, Stage.SHELTERED, to_shelter))
    flows.append(FlowRecord(new_day, Stage.PROCESSING, Stage.SELF_SETTLED, to_self))

    registered = min(params.registration_capacity, occ[Stage.AT_BORDER])
    occ[Stage.AT_BORDER] -= registered
    occ[Stage.PROCESSING] += registered
    flows.append(FlowRecord(new_day, Stage.AT_BORDER, Stage.PROCESSING, registered))

    arrived = min(params.arrival_rate, occ[Stage.WANT_TO_LEAVE])
    occ[Stage.WANT_TO_LEAVE] -= arrived
    occ[Stage.AT_BORDER] += arrived
    flows.append(FlowRecord(new_day, Stage.WANT_TO_LEAVE, Stage.AT_BORDER, arrived))

    occ[Stage.WANT_TO_LEAVE] += params.latent_demand
    occ[Stage.SHELTERED] += params.extra_shelter_requests

    return PipelineState(occupancy=occ, day=new_day), flows


def simulate(initial: PipelineState, params: ScenarioParams) -> SimulationTrace:
    """Run ``params.horizon`` daily steps from ``initial``."""
    params.validate()
    initial.validate()

    states = [initial]
    flows: list[FlowRecord] = []
    current = initial
    for _ in range(params.horizon):
        current, step_flows = step(current, params)
        states.append(current)
        flows.extend(step_flows)
    return SimulationTrace(states=tuple(states), flows=tuple(flows))


@dataclass(frozen=True, slots=True)
class ShelterOverflow:
    """First day the sheltered pool exceeded capacity, and by how much at worst."""

    day: int
    peak_exceedance: float


def shelter_overflow(
    trace: SimulationTrace, shelter_capacity: float | None
) -> ShelterOverflow | None:
    """Report the first strict exceedance of ``shelter_capacity``, if any."""
    if shelter_capacity is None:
        return None
    if not math.isfinite(shelter_capacity) or shelter_capacity < 0:
        raise ParameterError(
            f"shelter_capacity must be finite and >= 0, got {shelter_capacity!r}"
        )
    first_day: int | None = None
    peak = 0.0
    for state in trace.states:
        excess = state.occupancy[Stage.SHELTERED] - shelter_capacity
        if excess > 0:
            if first_day is None:
                first_day = state.day
            peak = max(peak, excess)
    if first_day is None:
        return None
    return ShelterOverflow(day=first_day, peak_exceedance=peak)


def bottlenecks(trace: SimulationTrace) -> list[tuple[Stage, float]]:
    """Non-terminal stages whose queues are still growing, worst first.

    Growth is the average net change per day over the trailing half of
    the trace, which ignores the warm-up ramp of systems started from
    empty pools and reports zero for anything that has settled down.
    """
    if len(trace.states) < 2:
        return []
    start = trace.horizon // 2
    span = trace.horizon - start
    out = []
    for stage in NON_TERMINAL_STAGES:
        series = trace.series(stage)
        growth = (series[-1] - series[start]) / span
        if growth > 0:
            out.append((stage, growth))
    out.sort(key=lambda pair: (-pair[1], pair[0].value))
    return out


@dataclass(frozen=True, slots=True)
class ContingencyRule:
    """Alert when a stage occupancy first exceeds a threshold."""

    rule_id: str
    metric: Stage
    threshold: float
    label: str = ""

    def validate(self) -> None:
        if not self.rule_id:
            raise ParameterError("rule_id must be non-empty")
        if not math.isfinite(self.threshold) or self.threshold < 0:
            raise ParameterError(
                f"rule {self.rule_id!r}: threshold must be finite and >= 0, "
                f"got {self.threshold!r}"
            )


def evaluate_triggers(
    trace: SimulationTrace, rules: Sequence[ContingencyRule]
) -> list[tuple[str, int]]:
    """First day each rule fires; rules that never fire are omitted."""
    seen: set[str] = set()
    for rule in rules:
        rule.validate()
        if rule.rule_id in seen:
            raise ParameterError(f"duplicate rule id: {rule.rule_id!r}")
        seen.add(rule.rule_id)

    fired: list[tuple[str, int]] = []
    for rule in rules:
        series = trace.series(rule.metric)
        for state, value in zip(trace.states, series):
            if value > rule.threshold:
                fired.append((rule.rule_id, state.day))
                break
    return fired
