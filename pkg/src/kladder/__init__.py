"""Clique-sum parameters, ladder minors and decomposition tools for small graphs."""

__version__ = "0.1.0"
