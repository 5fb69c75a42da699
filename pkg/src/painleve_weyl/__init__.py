"""Exact verification of affine Weyl group symmetric Painleve-type systems."""

__version__ = "0.1.0"
