"""Lipschitz quotient maps P o h built from complex polynomials."""
from .polycore import CriticalPoint, Polynomial, critical_points
from .quotient import QuotientMap, build

__all__ = ["CriticalPoint", "Polynomial", "QuotientMap", "build", "critical_points"]
__version__ = "0.1.0"
