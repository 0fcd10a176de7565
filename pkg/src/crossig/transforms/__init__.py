"""Invertible transforms between the time domain and explanation domains."""
from .base import KINDS, IdentityTransform, TargetRepresentation, Transform, TransformError
from .dft import (DFTTransform, bin_frequencies, conjugate_pairs, dft_forward, dft_inverse,
                  dft_inverse_complex, onesided)
from .linear import (ICAConvergenceWarning, LinearTransform, SingularMatrixError, amari_index,
                     excess_kurtosis_z, fit_fastica, linear_forward, linear_inverse)
from .seasonal import COMPONENTS, SeasonalTrendTransform, stl_decompose, stl_inverse
from .serialize import (make_transform, transform_from_dict, transform_from_json,
                        transform_to_dict, transform_to_json)

__all__ = [
    "COMPONENTS", "DFTTransform", "ICAConvergenceWarning", "IdentityTransform", "KINDS",
    "LinearTransform", "SeasonalTrendTransform", "SingularMatrixError", "TargetRepresentation",
    "Transform", "TransformError", "amari_index", "bin_frequencies", "conjugate_pairs",
    "dft_forward", "dft_inverse", "dft_inverse_complex", "excess_kurtosis_z", "fit_fastica",
    "linear_forward", "linear_inverse", "make_transform", "onesided", "stl_decompose",
    "stl_inverse", "transform_from_dict", "transform_from_json", "transform_to_dict",
    "transform_to_json",
]
