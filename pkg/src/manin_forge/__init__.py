"""Exact construction and verification of Manin triples from generalized metrics."""

__version__ = "0.1.0"
