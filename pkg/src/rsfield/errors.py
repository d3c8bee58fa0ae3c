"""Exception types shared across the package."""


class BudgetExceeded(RuntimeError):
    """Refusal to start a computation whose estimated size exceeds the budget."""

    def __init__(self, what: str, estimate: int, budget: int):
        self.what = what
        self.estimate = estimate
        self.budget = budget
        super().__init__(f"{what}: estimated size {estimate} exceeds budget {budget}")


class InvariantViolation(AssertionError):
    """An internal consistency check failed (indicates a bug, never bad input)."""


class NotInvertible(ZeroDivisionError):
    pass


class DegenerateConstruction(ValueError):
    pass
