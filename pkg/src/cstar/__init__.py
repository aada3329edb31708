"""Computations with graded normal affine surfaces and derivations of polynomial rings."""

__version__ = "0.1.0"
