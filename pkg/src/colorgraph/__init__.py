"""Computational toolkit for (D+1)-colored graphs."""

__version__ = "0.1.0"
