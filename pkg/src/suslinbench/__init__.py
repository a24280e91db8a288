"""Finite workbench for tree forcing conditions, lexicographic tree orders,
derived trees and entangledness checks."""
from .kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
