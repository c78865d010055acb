"""HTTP service exposing simulation, forecasting, and indicators."""
