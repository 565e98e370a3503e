"""Exception types shared across the package."""


class AuctionkitError(Exception):
    """Base class for package-specific failures."""


class GroundSetTooLargeError(AuctionkitError):
    """An exhaustive enumeration was refused: too many items in the ground set."""


class MalformedSystemError(AuctionkitError):
    """A set is close to two or more peaks, violating peak-system uniqueness."""


class DemandCapExceededError(AuctionkitError):
    """More utility maximizers exist than the caller allowed for."""

    def __init__(self, count: int, cap: int):
        super().__init__(f"{count} demand sets exceed the cap of {cap}")
        self.count = count
        self.cap = cap


class SchemaError(AuctionkitError):
    """An instance or prices document is malformed; messages are path-qualified."""


class RuleViolationError(AuctionkitError):
    """A price-update rule broke its contract (bad raise or a false certify)."""


class InfeasibleGenerationError(AuctionkitError):
    """Generator parameters admit no valid draw within the retry budget."""


class GridTooLargeError(AuctionkitError):
    """The requested price grid exceeds the enumeration safety limit."""
