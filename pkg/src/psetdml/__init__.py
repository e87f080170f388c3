"""Compile unions of arithmetic progressions and p-sets into torus dynamical systems."""

__version__ = "0.1.0"
