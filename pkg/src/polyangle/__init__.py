"""Angle sums of convex polytopes: constructions, estimates and span checks."""

__version__ = "0.1.0"
