"""One-at-a-time sensitivity sweeps over planner parameters.

A sweep reruns the same scenario with a single parameter set to each
value of a grid and collects the sheltered-occupancy series, which is
the pool planners actually budget for. A snapshot slices every swept
series at one day, which is what a slider UI needs.
"""

from __future__ import annotations

from dataclasses import replace
from typing import Mapping, Sequence

from .pipeline import (
    SWEEPABLE_PARAMS,
    ParameterError,
    PipelineState,
    ScenarioParams,
    Stage,
    simulate,
)


def sensitivity_sweep(
    base: ScenarioParams,
    param: str,
    grid: Sequence[float],
    initial: PipelineState | None = None,
) -> dict[float, list[float]]:
    """Map each grid value to the sheltered series it produces.

    Insertion order of the result follows the grid, so callers can rely
    on it for plotting. Every grid value must be in-domain for the
    swept parameter; the whole sweep is rejected otherwise.
    """
    if param not in SWEEPABLE_PARAMS:
        raise ParameterError(
            f"cannot sweep {param!r}; choose one of {', '.join(SWEEPABLE_PARAMS)}"
        )
    if len(grid) == 0:
        raise ParameterError("sweep grid is empty")
    if initial is None:
        initial = PipelineState.zero()

    out: dict[float, list[float]] = {}
    for value in grid:
        params = replace(base, **{param: value})
        params.validate()  # rejects out-of-domain grid values
        trace = simulate(initial, params)
        out[float(value)] = trace.series(Stage.SHELTERED)
    return out


def snapshot_at(sweep: Mapping[float, Sequence[float]], day: int) -> dict[float, float]:
    """Sheltered occupancy at one day for every swept value."""
    if not sweep:
        raise ParameterError("sweep is empty")
    for value, series in sweep.items():
        if not 0 <= day < len(series):
            raise ParameterError(
                f"day {day} out of range 0..{len(series) - 1} for grid value {value}"
            )
    return {value: float(series[day]) for value, series in sweep.items()}
