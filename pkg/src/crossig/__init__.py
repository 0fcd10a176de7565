"""Integrated-Gradients attributions in invertible target domains."""

__version__ = "0.1.0"
