"""Exception hierarchy shared by every evaluator and the CLI."""


class RamseyFormulaError(Exception):
    """Base class for all errors raised by this package."""


class PreconditionError(RamseyFormulaError, ValueError):
    """Inputs violate a documented precondition (CLI exit code 2)."""


class ParameterError(PreconditionError):
    pass


class DivisibilityViolated(PreconditionError):
    pass


class WrongResidueClass(PreconditionError):
    pass


class IrrationalQInExactMode(PreconditionError):
    pass


class NotInDomain(PreconditionError):
    pass


class OrderMismatch(RamseyFormulaError, ValueError):
    """Cyclotomic operands of different orders combined without lifting."""


class BudgetExceeded(RamseyFormulaError):
    """Requested enumeration is larger than the configured budget (CLI exit code 3)."""

    def __init__(self, what: str, terms: int, budget: int):
        self.what = what
        self.terms = terms
        self.budget = budget
        super().__init__(f"{what}: {count_text(terms)} terms exceeds budget {count_text(budget)}")


def count_text(x: int) -> str:
    """Decimal for moderate counts; powers of two (or their bit length) beyond 64 bits."""
    if x.bit_length() <= 64:
        return str(x)
    if x & (x - 1) == 0:
        return f"2^{x.bit_length() - 1}"
    return f"~2^{x.bit_length()}"


class SamplerExhausted(RamseyFormulaError):
    pass


class ConsistencyError(RamseyFormulaError):
    """Two independent routes disagreed; this indicates a bug, never bad input."""
