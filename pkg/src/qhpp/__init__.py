"""Exact verification toolkit for rational Q-homology projective planes with cyclic quotient singularities."""

__version__ = "0.1.0"
