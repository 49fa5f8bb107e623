"""Numerical verification toolkit for almost (para)contact metric structures."""

__version__ = "0.1.0"
