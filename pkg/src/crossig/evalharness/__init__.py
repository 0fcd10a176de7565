"""Synthetic corpora and insertion/deletion evaluation."""
from .datasets import (DatasetSpec, TrendSeasonalSeries, TwoClassSet, generate_trend_seasonal,
                       generate_trend_seasonal_set, generate_two_class, sinusoid)
from .interventions import (METHODS, MODES, CurveRow, InterventionReport, feature_count,
                            intervene, run_curve, select_top_k)
from .prng import Stream, splitmix64
from .sweep import SweepResult, frequency_ig_sweep, probe_frequencies

__all__ = [
    "CurveRow", "DatasetSpec", "InterventionReport", "METHODS", "MODES", "Stream", "SweepResult",
    "TrendSeasonalSeries", "TwoClassSet", "feature_count", "frequency_ig_sweep",
    "generate_trend_seasonal", "generate_trend_seasonal_set", "generate_two_class", "intervene",
    "probe_frequencies", "run_curve", "select_top_k", "sinusoid", "splitmix64",
]
