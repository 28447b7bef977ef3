"""Exact-arithmetic laboratory for Sylvester-Gallai configurations in the complex projective plane."""

__version__ = "0.1.0"
