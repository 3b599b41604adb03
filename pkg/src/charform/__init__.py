"""Exact characteristic-2 quadratic form and involution algebra toolkit."""

__version__ = "0.1.0"
