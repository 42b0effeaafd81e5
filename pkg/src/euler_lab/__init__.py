"""Lagrangian vortex-particle laboratory for axisymmetric flows without swirl."""

__version__ = "0.1.0"
