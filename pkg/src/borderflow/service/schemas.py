"""Request bodies for the versioned JSON API.

Validation lives here as pydantic constraints so a bad request dies
with a 422 naming the offending field before any domain code runs.
Responses are plain dicts built by the app: they carry full-precision
floats and need no validation of their own.
"""

from __future__ import annotations

from datetime import date

from pydantic import BaseModel, Field, field_validator

from ..pipeline import Stage

_STAGE_NAMES = tuple(s.value for s in Stage)


class ScenarioParamsBody(BaseModel):
    latent_demand: float = Field(default=0.0, ge=0)
    arrival_rate: float = Field(default=0.0, ge=0)
    registration_capacity: float = Field(default=0.0, ge=0)
    special_needs_fraction: float = Field(default=0.0, ge=0, le=1)
    extra_shelter_requests: float = Field(default=0.0, ge=0)
    relocation_capacity: float = Field(default=0.0, ge=0)
    shelter_capacity: float | None = Field(default=None, ge=0)
    horizon: int = Field(default=30, ge=1, le=3650)

    model_config = {"extra": "forbid"}


class RuleBody(BaseModel):
    rule_id: str = Field(min_length=1)
    metric: str = Field(default="sheltered")
    threshold: float = Field(ge=0)
    label: str = ""

    model_config = {"extra": "forbid"}

    @field_validator("metric")
    @classmethod
    def _known_stage(cls, v: str) -> str:
        if v not in _STAGE_NAMES:
            raise ValueError(f"unknown stage {v!r}; choose from {_STAGE_NAMES}")
        return v


class SimulateBody(BaseModel):
    params: ScenarioParamsBody
    initial: dict[str, float] = Field(default_factory=dict)
    rules: list[RuleBody] = Field(default_factory=list)

    model_config = {"extra": "forbid"}

    @field_validator("initial")
    @classmethod
    def _valid_initial(cls, v: dict[str, float]) -> dict[str, float]:
        for name, occ in v.items():
            if name not in _STAGE_NAMES:
                raise ValueError(f"unknown stage {name!r}; choose from {_STAGE_NAMES}")
            if occ < 0:
                raise ValueError(f"{name} occupancy must be >= 0")
        return v


class SensitivityBody(BaseModel):
    base: ScenarioParamsBody
    param: str = Field(min_length=1)
    grid: list[float] = Field(min_length=1, max_length=200)
    snapshot_day: int = Field(default=0, ge=0)
    initial: dict[str, float] = Field(default_factory=dict)

    model_config = {"extra": "forbid"}

    @field_validator("initial")
    @classmethod
    def _valid_initial(cls, v: dict[str, float]) -> dict[str, float]:
        return SimulateBody._valid_initial(v)


class SeriesBody(BaseModel):
    """Inline daily series: one value per day from ``start``."""

    name: str = Field(min_length=1)
    start: date
    values: list[float] = Field(min_length=1)

    model_config = {"extra": "forbid"}


class TargetBody(BaseModel):
    window: int = Field(default=7, ge=1)
    horizon: int = Field(default=30, ge=1)

    model_config = {"extra": "forbid"}


class BootstrapBody(BaseModel):
    replicates: int = Field(default=1000, ge=100)
    level: float = Field(default=0.80, gt=0, lt=1)
    seed: int = 0

    model_config = {"extra": "forbid"}


class TrainBody(BaseModel):
    arrivals: SeriesBody
    indicators: list[str] | None = None  # None = every panel column
    target: TargetBody = TargetBody()
    lags: list[int] = Field(default=[30, 37, 44], min_length=1)
    n_test: int = Field(default=83, ge=1)
    seed: int = 0
    bootstrap: BootstrapBody = BootstrapBody()
    future_days: int = Field(default=0, ge=0, le=365)

    model_config = {"extra": "forbid"}


class ScenarioCreateBody(BaseModel):
    scenario_id: str = ""
    name: str = Field(min_length=1)
    params: ScenarioParamsBody
    initial: dict[str, float] = Field(default_factory=dict)
    ranges: dict[str, dict[str, float]] | None = None

    model_config = {"extra": "forbid"}

    @field_validator("initial")
    @classmethod
    def _valid_initial(cls, v: dict[str, float]) -> dict[str, float]:
        return SimulateBody._valid_initial(v)


class RunCreateBody(BaseModel):
    rules: list[RuleBody] = Field(default_factory=list)

    model_config = {"extra": "forbid"}
