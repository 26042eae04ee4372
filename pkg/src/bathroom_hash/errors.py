"""Exception types raised across the package."""


class BathroomHashError(Exception):
    """Base class for all package errors."""


class NonPrimeCapacity(BathroomHashError, ValueError):
    """Table capacity failed the primality check."""


class InvalidParams(BathroomHashError, ValueError):
    """Strategy parameters violate their invariants."""


class InvalidSpec(BathroomHashError, ValueError):
    """A trial specification is malformed."""


class InvalidStart(BathroomHashError, ValueError):
    """Simulator start index lies outside the board."""


class ContractViolation(BathroomHashError, RuntimeError):
    """A probe cursor was driven past exhaustion."""
