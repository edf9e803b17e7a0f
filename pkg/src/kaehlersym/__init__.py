"""Numerical curvature and symmetry analysis of Kaehler manifolds."""

__version__ = "0.1.0"
