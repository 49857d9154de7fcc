"""Exact rational scalars and their "p/q" string form."""

from fractions import Fraction
from typing import Union

RationalLike = Union[int, str, Fraction]


def to_rational(value: RationalLike) -> Fraction:
    """Coerce an int, Fraction or "p/q" string to a reduced Fraction.

    Floats are rejected: every algebraic value must be exact.

    Raises:
        ValueError: If the value is a float, bool or an unparsable string.
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise ValueError(f"Exact rational expected, got {type(value).__name__} {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"Invalid rational string {value!r}: {e}")
    raise ValueError(f"Cannot interpret {value!r} as a rational")


def format_rational(value: Fraction) -> str:
    """Serialize as "p/q" (or "p" when integral)."""
    return str(Fraction(value))
