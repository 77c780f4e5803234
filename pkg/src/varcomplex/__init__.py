"""Symbolic engine for the covariant variational bicomplex."""

from .algebra import QI, Coord, Const, FieldSymbol, Func, Jet, ScalarExpr, total_derivative
from .calculus import KillingField, horizontal_diff, interior, lie_total, total_diff, vertical_diff
from .fieldtheory import (
    LagrangianSystem,
    euler_lagrange,
    hamilton_identity,
    invariance_check,
    momentum_map,
    noether_check,
    on_shell_reduce,
    symplectic_density,
    total_symplectic,
)
from .forms import Form, ResourceBoundError, term_limit, wedge
from .hodge import MINKOWSKI_2D, AbstractMode, TableMode, star

__version__ = "0.1.0"

__all__ = [
    "QI", "Coord", "Const", "FieldSymbol", "Func", "Jet", "ScalarExpr", "total_derivative",
    "KillingField", "horizontal_diff", "interior", "lie_total", "total_diff", "vertical_diff",
    "LagrangianSystem", "euler_lagrange", "hamilton_identity", "invariance_check",
    "momentum_map", "noether_check", "on_shell_reduce", "symplectic_density",
    "total_symplectic", "Form", "ResourceBoundError", "term_limit", "wedge",
    "MINKOWSKI_2D", "AbstractMode", "TableMode", "star",
]
