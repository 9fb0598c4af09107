"""Invariant and equivariant linear layers for typed node sets.

The package has three strands:

* exact dimension counts and explicit indicator-tensor bases for linear
  maps commuting with typed node permutations, cyclic shifts, and 2-D
  grid translations;
* small learnable layers built on those bases (sum-pooling invariant
  maps, equivariant maps, and invariant networks), with analytic
  Jacobians;
* an exact verification harness that computes minimal generator degrees
  of graph-automorphism invariant rings and certifies degree bounds for
  every small graph, plus the zero-sum sequence machinery behind the
  translation-group degree bound.
"""

__version__ = "0.1.0"

from .budgets import Budgets
from .errors import BasisFileError, BudgetError, Graph6ParseError

__all__ = [
    "__version__",
    "Budgets",
    "BudgetError",
    "Graph6ParseError",
    "BasisFileError",
]
