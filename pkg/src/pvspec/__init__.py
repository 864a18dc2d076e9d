"""Exact symbolic tools for linear differential operators and their specializations."""

__version__ = "0.1.0"
