"""Small differentiable models, FIR design and closed-form oracles."""
from .filters import FilterDesign, analytic_sinusoid_output, design_fir, frequency_response
from .io import (FORMAT_VERSION, ModelFormatError, dumps_model, load_model, loads_model,
                 model_from_dict, model_to_dict, save_model)
from .spec import (LAYER_TYPES, Layer, ModelShapeError, ModelSpec, conv1d, dense,
                   global_avg_pool, relu, select_output)
from .zoo import (DEFAULT_CUTOFF, DEFAULT_FS, DEFAULT_N, DEFAULT_TAPS, build_linear_model,
                  build_single_channel, build_sinusoid_classifier, channel_spec, classify,
                  smooth_probe_graph)

__all__ = [
    "DEFAULT_CUTOFF", "DEFAULT_FS", "DEFAULT_N", "DEFAULT_TAPS", "FORMAT_VERSION",
    "FilterDesign", "LAYER_TYPES", "Layer", "ModelFormatError", "ModelShapeError", "ModelSpec",
    "analytic_sinusoid_output", "build_linear_model", "build_single_channel",
    "build_sinusoid_classifier", "channel_spec", "classify", "conv1d", "dense", "design_fir",
    "dumps_model", "frequency_response", "global_avg_pool", "load_model", "loads_model",
    "model_from_dict", "model_to_dict", "relu", "save_model", "select_output",
    "smooth_probe_graph",
]
