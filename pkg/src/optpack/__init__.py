"""Exact verification toolkit for optimal line packings in low dimensions."""

__version__ = "0.1.0"
