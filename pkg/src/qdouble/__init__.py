"""Exact computations for quantum doubles of finite groups."""

__version__ = "0.1.0"
