"""Exception types shared across the package."""


class ErgoflucError(Exception):
    """Base class for all package-specific errors."""


class DomainMismatchError(ErgoflucError, ValueError):
    """An event, function, or map refers to atoms outside the given space."""


class InvalidParameterError(ErgoflucError, ValueError):
    """A numeric parameter is outside its admissible range."""


class WindowRangeError(ErgoflucError, IndexError):
    """A window or index range does not fit inside the given sequence."""


class BudgetError(ErgoflucError, RuntimeError):
    """A computation would exceed an explicit size or horizon budget."""


class GrowthOverflowError(ErgoflucError, OverflowError):
    """Iterating a growth function exceeded the configured integer cap."""


class ConfigError(ErgoflucError, ValueError):
    """A configuration document failed validation.

    ``field`` names the offending entry so callers can point at it.
    """

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")
