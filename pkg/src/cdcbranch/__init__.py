"""Exact-arithmetic toolkit for ideal mixed-integer branching formulations
of combinatorial disjunctive constraints."""

__version__ = "0.1.0"
