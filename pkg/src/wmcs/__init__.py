"""Weak monotone comparative statics on finite orders."""

__version__ = "0.1.0"
