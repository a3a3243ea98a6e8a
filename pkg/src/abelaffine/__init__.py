"""Exact verification of invariant affine structures on abelian Lie groups."""

__version__ = "1.0.0"
