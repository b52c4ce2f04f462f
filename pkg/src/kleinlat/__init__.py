"""Exact-arithmetic toolkit for lattices over the Kleinian 4-group."""

__version__ = "0.1.0"
