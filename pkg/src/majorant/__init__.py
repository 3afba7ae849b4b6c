"""Numerical certificates for majorization, transport and sharp slicing inequalities.

Submodules
----------
numerics, specfun
    Adaptive quadrature, root finding and the special functions used throughout.
measures, convex_order
    Registered densities, distribution functions and majorization verdicts.
transport1d
    Monotone transport maps and their contraction diagnostics.
inequalities, lattice_slicing, entropy
    The inequality checks built on the above.
cli
    The ``verify`` batch driver.
"""
from . import errors
from .errors import MajorantError

__version__ = "0.1.0"

__all__ = ["errors", "MajorantError", "__version__"]
