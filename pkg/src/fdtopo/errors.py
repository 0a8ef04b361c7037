class FdTopoError(Exception):
    """Base class for errors raised by fdtopo."""


class InvalidInput(FdTopoError, ValueError):
    """Malformed input: universe mismatch, unknown attribute, broken cover, ..."""


class BudgetExceeded(FdTopoError):
    """An exponential enumeration would exceed its configured budget."""

    def __init__(self, message: str, needed: int, budget: int):
        super().__init__(message)
        self.needed = needed
        self.budget = budget
