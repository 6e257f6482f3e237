"""Closed-form sums of weighted Laguerre series and their numerical checks."""

__version__ = "0.1.0"
