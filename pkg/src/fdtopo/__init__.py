"""Functional dependencies as simplicial complexes, with exact relational oracles."""

from fdtopo.errors import BudgetExceeded, FdTopoError, InvalidInput

__version__ = "0.1.0"

__all__ = ["BudgetExceeded", "FdTopoError", "InvalidInput", "__version__"]
