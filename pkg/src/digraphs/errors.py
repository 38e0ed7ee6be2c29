class DigraphsError(ValueError):
    """Base class for every error raised by the library."""


class ParseError(DigraphsError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DomainError(DigraphsError):
    """Out-of-range values, size/arity mismatches and violated preconditions."""


class BudgetExceededError(DigraphsError):
    def __init__(self, what: str, budget: int, count: int = 0):
        self.budget = budget
        self.count = count
        super().__init__(
            f"{what}: budget of {budget} exhausted ({count} found so far)"
        )


class FalsifiedError(DigraphsError):
    """Raised when a computed instance contradicts a theorem it must satisfy."""
