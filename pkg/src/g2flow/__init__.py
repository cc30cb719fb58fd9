"""Exact computations for warped G2-structures on Lie groups M^6 x_f S^1 and their Laplacian coflow."""

__version__ = "0.1.0"
