"""Discrete nonlinear Neumann problems on the disk and the axisymmetric ball."""
from .grid import GridMode, PolarGrid
from .measure import Atom, BoundaryMeasure, mollify_measure
from .solver import GridSolution, SolverError, SolverOptions, solve_linear, solve_nonlinear

__all__ = ["Atom", "BoundaryMeasure", "GridMode", "GridSolution", "PolarGrid", "SolverError",
           "SolverOptions", "mollify_measure", "solve_linear", "solve_nonlinear"]
