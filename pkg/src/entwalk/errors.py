"""Exception types raised by the library."""


class WalkError(ValueError):
    """Base class for all library errors."""


class InvalidSpecError(WalkError):
    """A coupler, network or model description violates its invariants."""


class InvalidInputError(WalkError):
    """An argument (rail index, distribution, phase...) is out of range or malformed."""


class BudgetExceededError(WalkError):
    """Brute-force enumeration was requested beyond its size budget."""


class SchemaError(WalkError):
    """A results file or run configuration does not match the expected layout."""
