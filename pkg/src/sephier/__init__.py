"""Separation and covering for polynomial and Boolean-polynomial closures."""

__version__ = "0.1.0"
FORMAT_VERSION = 1
