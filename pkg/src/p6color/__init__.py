"""Exact 4-precolouring extension for excellent starred precolourings of P6-free graphs."""

from .errors import (BudgetExceeded, InvalidInstance, InvariantViolation, OracleLimitExceeded,
                     P6ColorError, RequiresCompanionReduction)
from .graph_core import Graph, find_induced_path, is_pt_free
from .precoloring import StarredPrecoloring, check_extension, validate

__all__ = [
    "BudgetExceeded", "InvalidInstance", "InvariantViolation", "OracleLimitExceeded",
    "P6ColorError", "RequiresCompanionReduction", "Graph", "find_induced_path", "is_pt_free",
    "StarredPrecoloring", "check_extension", "validate",
]
