"""Exact mod-2 cohomology computations for real and oriented Grassmannians."""

__version__ = "0.1.0"
