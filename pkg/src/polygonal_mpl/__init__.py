"""Exact symbol calculus for multiple polylogarithms with polygon-shaped arguments."""

__version__ = "0.1.0"
