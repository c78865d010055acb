"""Arrivals forecasting: features, models, ensembling, intervals."""
