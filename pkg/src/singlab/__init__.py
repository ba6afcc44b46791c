"""Numerical laboratory for harmonic functions with nonlinear Neumann boundary conditions."""
__version__ = "0.1.0"
