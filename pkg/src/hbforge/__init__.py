"""Exact computer-algebra kernel for codimension-two perfect ideals, their
Rees algebras and ideals of plane points."""

from .poly import Field, MonomialOrder, PolyError, PolyRing, Polynomial
from .groebner import Budget, BudgetError, GroebnerBasis, groebner_basis
from .ideal import Ideal
from .matrix import PolyMatrix

__version__ = "0.1.0"

__all__ = [
    "Budget",
    "BudgetError",
    "Field",
    "GroebnerBasis",
    "Ideal",
    "MonomialOrder",
    "PolyError",
    "PolyMatrix",
    "PolyRing",
    "Polynomial",
    "groebner_basis",
]
