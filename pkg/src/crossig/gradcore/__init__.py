"""Minimal reverse-mode autodiff over real and complex tensors."""
from .engine import GradientSet, LeafGradient, backward, finite_difference_check, forward_eval
from .graph import (ComputeGraph, GraphBuilder, GraphError, Node, NonFiniteError, Ref,
                    ShapeMismatchError, UnboundLeafError)
from .random_graphs import random_complex_model, random_smooth_graph

__all__ = [
    "ComputeGraph", "GraphBuilder", "GraphError", "GradientSet", "LeafGradient", "Node",
    "NonFiniteError", "Ref", "ShapeMismatchError", "UnboundLeafError", "backward",
    "finite_difference_check", "forward_eval", "random_complex_model", "random_smooth_graph",
]
