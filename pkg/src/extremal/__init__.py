"""Exact and certified experiments on extremal real numbers."""

__version__ = "0.1.0"
