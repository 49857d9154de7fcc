"""Enumeration types for orbiflop."""

from enum import Enum


class Side(str, Enum):
    """The two small resolutions of a local orbi-conifold."""

    S = "s"
    SF = "sf"

    @property
    def flipped(self) -> "Side":
        return Side.SF if self is Side.S else Side.S


class SingularPoint(str, Enum):
    """The two orbifold points on the exceptional curve."""

    P = "p"
    Q = "q"


class Command(str, Enum):
    """CLI subcommands."""

    RING = "ring"
    GW = "gw"
    THREEPOINT = "threepoint"
    FLOP_CHECK = "flop-check"
    RESOLVE = "resolve"
    RUAN_VERIFY = "ruan-verify"
    VERIFY_GEOMETRY = "verify-geometry"


class CheckStatus(str, Enum):
    """Outcome of a verification run."""

    PASSED = "passed"
    FAILED = "failed"


class OutputFormat(str, Enum):
    """Report rendering formats."""

    JSON = "json"
    TABLE = "table"
