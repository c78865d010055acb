"""Seeded synthetic data for demos and end-to-end checks.

The arrivals generator layers weekly and annual seasonality, a mild
linear trend, AR(1) noise, and a planted dependence on an indicator
lagged by exactly the forecast lead time. A forecaster that uses its
inputs properly can therefore beat the historical mean on this data by
a wide margin, and one that leaks or ignores features cannot.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date

import numpy as np

from .forecasting.series import DailySeries
from .pipeline import PipelineState, ScenarioParams


@dataclass(frozen=True)
class SyntheticSpec:
    start: date = date(2021, 7, 26)
    days: int = 353
    base: float = 400.0
    trend_per_day: float = 0.15
    weekly_amplitude: float = 40.0
    seasonal_amplitude: float = 120.0
    seasonal_period_days: float = 60.0
    noise_scale: float = 12.0
    ar_coef: float = 0.6
    signal_coef: float = 1.5
    signal_lag: int = 30
    seed: int = 0


def make_synthetic_dataset(
    spec: SyntheticSpec = SyntheticSpec(),
) -> tuple[DailySeries, dict[str, DailySeries]]:
    """(arrivals, indicators) where ``help_requests`` leads arrivals.

    ``help_requests`` at day d moves arrivals at day d + signal_lag;
    ``fuel_price`` is an unrelated mean-reverting nuisance column, so
    models must learn which indicator matters.
    """
    rng = np.random.default_rng(spec.seed)
    t = np.arange(spec.days)

    # driver z[i] is the signal value on day i - signal_lag, so the
    # series starts signal_lag days before day 0 to cover the warm-up
    z = np.zeros(spec.days + spec.signal_lag)
    shocks = rng.normal(0, 1, size=len(z))
    for i in range(1, len(z)):
        z[i] = 0.9 * z[i - 1] + shocks[i]
    z *= 10.0
    effect = z[: spec.days]  # driver at day d - lag moves arrivals at day d
    indicator = z[spec.signal_lag : spec.signal_lag + spec.days]  # driver at day d

    noise = np.zeros(spec.days)
    eps = rng.normal(0, spec.noise_scale, size=spec.days)
    for i in range(1, spec.days):
        noise[i] = spec.ar_coef * noise[i - 1] + eps[i]

    arrivals = (
        spec.base
        + spec.trend_per_day * t
        + spec.weekly_amplitude * np.sin(2 * np.pi * t / 7.0)
        + spec.seasonal_amplitude * np.sin(2 * np.pi * t / spec.seasonal_period_days)
        + spec.signal_coef * effect
        + noise
    )
    arrivals = np.maximum(arrivals, 0.0)

    # mean-reverting nuisance: unrelated to arrivals but stays in range,
    # so models that latch onto it in-sample pay for it out-of-sample
    # without the whole test window leaving the feature space
    fuel = np.zeros(spec.days)
    fuel_shocks = rng.normal(0, 1.0, size=spec.days)
    for i in range(1, spec.days):
        fuel[i] = 0.95 * fuel[i - 1] + fuel_shocks[i]
    fuel = 100.0 + 3.0 * fuel / max(fuel.std(), 1e-9)

    return (
        DailySeries(name="arrivals", start=spec.start, values=arrivals, units="people/day"),
        {
            "help_requests": DailySeries(
                name="help_requests",
                start=spec.start,
                values=indicator + rng.normal(0, 0.5, spec.days),
            ),
            "fuel_price": DailySeries(name="fuel_price", start=spec.start, values=fuel),
        },
    )


def random_scenario(
    rng: np.random.Generator, horizon: int = 100
) -> tuple[ScenarioParams, PipelineState]:
    """A random but always-valid scenario with non-trivial occupancies."""
    params = ScenarioParams(
        latent_demand=float(rng.uniform(0, 1000)),
        arrival_rate=float(rng.uniform(0, 1500)),
        registration_capacity=float(rng.uniform(0, 1200)),
        special_needs_fraction=float(rng.uniform(0, 1)),
        extra_shelter_requests=float(rng.uniform(0, 300)),
        relocation_capacity=float(rng.uniform(0, 500)),
        shelter_capacity=float(rng.uniform(0, 20000)) if rng.random() < 0.5 else None,
        horizon=horizon,
    )
    initial = PipelineState.from_names(
        {
            "want_to_leave": float(rng.uniform(0, 50000)),
            "at_border": float(rng.uniform(0, 5000)),
            "processing": float(rng.uniform(0, 2000)),
            "sheltered": float(rng.uniform(0, 10000)),
            "relocated": float(rng.uniform(0, 10000)),
            "self_settled": float(rng.uniform(0, 10000)),
        }
    )
    return params, initial
