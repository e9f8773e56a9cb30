"""Numerical toolkit for faithful control representations of convex
Hamiltonians via epigraph parametrization and Steiner selections."""

__version__ = "0.1.0"
