"""Integrated-gradients attribution in arbitrary invertible target domains."""
from .attribution import (ALGORITHMS, attribute, baseline_filtered, baseline_zero, compose,
                          ig_classic, ig_complex_split, ig_complex_wirtinger, ig_real_domain,
                          integrate_target)
from .inspection import DegenerateCoordinateWarning, redistribute_time_ig, virtual_inspection_check
from .path import RULES, PathSpec, quadrature
from .result import AttributionResult, completeness_residual

__all__ = [
    "ALGORITHMS", "AttributionResult", "DegenerateCoordinateWarning", "PathSpec", "RULES",
    "attribute", "baseline_filtered", "baseline_zero", "completeness_residual", "compose",
    "ig_classic", "ig_complex_split", "ig_complex_wirtinger", "ig_real_domain",
    "integrate_target", "quadrature", "redistribute_time_ig", "virtual_inspection_check",
]
