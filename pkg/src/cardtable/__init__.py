"""Deterministic card-game environments with tabular solvers and evaluation tools."""

__version__ = "0.1.0"
