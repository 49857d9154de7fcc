"""
Custom exceptions for orbiflop.

Every error raised by the library derives from OrbiflopError so the CLI can
map library failures to a usage exit code in one place.
"""

from typing import Optional


class OrbiflopError(Exception):
    """Base exception for orbiflop errors."""

    def __init__(self, message: str, field: Optional[str] = None):
        self.message = message
        self.field = field
        super().__init__(self.message)


class InvalidModelError(OrbiflopError):
    """Raised when (r, a) do not describe a valid local orbi-conifold."""

    def __init__(self, message: str = "Invalid local model", field: Optional[str] = None):
        super().__init__(message, field=field)


class SectorRangeError(OrbiflopError):
    """Raised when a twisted-sector index falls outside 1..r-1 (or 1..r)."""

    def __init__(self, message: str = "Twisted sector out of range"):
        super().__init__(message)


class UndefinedProductError(OrbiflopError):
    """Raised when a local product needs global data (H * H on W^s)."""

    def __init__(self, message: str = "Product requires global data"):
        super().__init__(message)


class VariableMismatchError(OrbiflopError):
    """Raised when rational functions in different Novikov variables are combined."""

    def __init__(self, lhs: str, rhs: str):
        super().__init__(f"Cannot combine functions of '{lhs}' and '{rhs}'")
        self.lhs = lhs
        self.rhs = rhs


class SeriesExpansionError(OrbiflopError):
    """Raised when a rational function has no power-series expansion at 0."""

    def __init__(self, message: str = "Denominator vanishes at 0"):
        super().__init__(message)


class CorrespondenceError(OrbiflopError):
    """Raised when a flop correspondence does not cover or respect the bases."""

    def __init__(self, message: str = "Invalid flop correspondence", field: Optional[str] = None):
        super().__init__(message, field=field)


class RingDataError(OrbiflopError):
    """Raised when global ring data is inconsistent."""

    def __init__(self, message: str = "Inconsistent ring data", field: Optional[str] = None):
        super().__init__(message, field=field)


class SingularPairingError(RingDataError):
    """Raised when the pairing matrix cannot be inverted."""

    def __init__(self, message: str = "Pairing matrix is singular"):
        super().__init__(message, field="pairing")


class EnumerationCapError(OrbiflopError):
    """Raised when 2^kappa enumeration would exceed the configured cap."""

    def __init__(self, kappa: int, cap: int):
        super().__init__(f"kappa={kappa} exceeds enumeration cap {cap}", field="kappa")
        self.kappa = kappa
        self.cap = cap


class SamplingBudgetError(OrbiflopError):
    """Raised when rejection sampling runs out of attempts."""

    def __init__(self, message: str = "Rejection budget exhausted"):
        super().__init__(message)


class LeafMembershipError(OrbiflopError):
    """Raised when a point handed to the leaf identification is off its leaf."""

    def __init__(self, message: str = "Point is not on the requested leaf"):
        super().__init__(message)


class ConfigError(OrbiflopError):
    """Raised when a config document is unreadable or violates its schema."""

    def __init__(self, message: str = "Invalid configuration", field: Optional[str] = None):
        super().__init__(message, field=field)
