"""Contingency-planning toolkit for border-crossing operations.

Two halves:

* a deterministic daily-step simulation of people moving through
  border-crossing stages under capacity constraints, with sensitivity
  sweeps and threshold triggers for planners, and
* a 30-day-ahead arrivals forecaster built from an ensemble of
  regression models fed by ingested indicator series.

Both are exposed through an HTTP service and a command line interface.
"""

__version__ = "0.1.0"
