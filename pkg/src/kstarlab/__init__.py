"""Evaluation and empirical study of the elliptic-curve weight K*(N)."""

__version__ = "0.1.0"
