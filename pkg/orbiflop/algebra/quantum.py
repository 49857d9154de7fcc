"""
Rational functions in a single Novikov variable.

A QuantumRational is the reduced fraction N(t)/D(t) of two polynomials with
rational coefficients, where t stands for q^{[Gamma]} of one extremal ray.
Polynomial gcd and exact division are delegated to sympy over QQ; the
canonical form keeps D monic, so equality is a comparison of coefficient
tuples.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Sequence, Tuple, Union

import sympy as sp
from sympy import QQ, Poly

from ..utils.errors import SeriesExpansionError, VariableMismatchError
from .rationals import RationalLike, format_rational, to_rational

logger = logging.getLogger(__name__)

# Polynomials are built over one shared generator; the ray identity lives on the instance.
_T = sp.Symbol("t")

Coefficients = Tuple[Fraction, ...]
Operand = Union["QuantumRational", int, Fraction]


def _trim(coeffs: Sequence[Fraction]) -> Coefficients:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _to_poly(coeffs: Sequence[Fraction]) -> Poly:
    if not coeffs:
        return Poly(0, _T, domain=QQ)
    descending = [sp.Rational(c.numerator, c.denominator) for c in reversed(coeffs)]
    return Poly(descending, _T, domain=QQ)


def _from_poly(poly: Poly) -> Coefficients:
    if poly.is_zero:
        return ()
    ascending = [Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())]
    return _trim(ascending)


def _canonical(numerator: Sequence[Fraction], denominator: Sequence[Fraction]) -> Tuple[Coefficients, Coefficients]:
    num = _trim([to_rational(c) for c in numerator])
    den = _trim([to_rational(c) for c in denominator])
    if not den:
        raise ZeroDivisionError("QuantumRational with zero denominator")
    if not num:
        return (), (Fraction(1),)

    n, d = _to_poly(num), _to_poly(den)
    g = n.gcd(d)
    n, d = n.exquo(g), d.exquo(g)
    lc = d.LC()
    n, d = n.quo_ground(lc), d.quo_ground(lc)
    return _from_poly(n), _from_poly(d)


@dataclass(frozen=True, eq=False)
class QuantumRational:
    """Reduced rational function of one ray variable.

    Attributes:
        variable: Ray identifier (the Novikov variable t = q^{[Gamma]}).
        numerator: Ascending coefficients of N.
        denominator: Ascending coefficients of D, always monic after construction.
    """

    variable: str
    numerator: Coefficients
    denominator: Coefficients = (Fraction(1),)

    def __post_init__(self) -> None:
        num, den = _canonical(self.numerator, self.denominator)
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", den)

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------

    @classmethod
    def constant(cls, value: RationalLike, variable: str = "t") -> "QuantumRational":
        return cls(variable, (to_rational(value),))

    @classmethod
    def zero(cls, variable: str = "t") -> "QuantumRational":
        return cls(variable, ())

    @classmethod
    def monomial(cls, variable: str, power: int, coefficient: RationalLike = 1) -> "QuantumRational":
        """c * t^power for any integer power (negative powers go to the denominator)."""
        c = to_rational(coefficient)
        if power >= 0:
            return cls(variable, (Fraction(0),) * power + (c,))
        return cls(variable, (c,), (Fraction(0),) * (-power) + (Fraction(1),))

    @classmethod
    def multiple_cover(cls, variable: str, period: int, coefficient: RationalLike = 1) -> "QuantumRational":
        """c * t^period / (1 - t^period), the summed multiple-cover series."""
        if period < 1:
            raise ValueError(f"period must be >= 1, got {period}")
        c = to_rational(coefficient)
        zeros = (Fraction(0),) * (period - 1)
        num = (Fraction(0),) + zeros + (c,)
        den = (Fraction(1),) + zeros + (Fraction(-1),)
        return cls(variable, num, den)

    # ------------------------------------------------------------------
    # Queries
    # ------------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.numerator

    @property
    def is_constant(self) -> bool:
        return len(self.numerator) <= 1 and len(self.denominator) == 1

    @property
    def constant_value(self) -> Fraction:
        if not self.is_constant:
            raise ValueError(f"{self} is not constant")
        return self.numerator[0] if self.numerator else Fraction(0)

    def evaluate(self, point: RationalLike) -> Fraction:
        """Exact value at a rational point of the ray variable."""
        x = to_rational(point)
        num = sum((c * x**k for k, c in enumerate(self.numerator)), Fraction(0))
        den = sum((c * x**k for k, c in enumerate(self.denominator)), Fraction(0))
        if den == 0:
            raise ZeroDivisionError(f"{self} has a pole at {x}")
        return num / den

    def renamed(self, variable: str) -> "QuantumRational":
        return QuantumRational(variable, self.numerator, self.denominator)

    # ------------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------------

    def _coerce(self, other: Operand) -> "QuantumRational":
        if isinstance(other, QuantumRational):
            return other
        return QuantumRational.constant(to_rational(other), self.variable)

    def _common_variable(self, other: "QuantumRational") -> str:
        if self.is_constant:
            return other.variable
        if other.is_constant or other.variable == self.variable:
            return self.variable
        raise VariableMismatchError(self.variable, other.variable)

    def __add__(self, other: Operand) -> "QuantumRational":
        rhs = self._coerce(other)
        var = self._common_variable(rhs)
        n1, d1 = _to_poly(self.numerator), _to_poly(self.denominator)
        n2, d2 = _to_poly(rhs.numerator), _to_poly(rhs.denominator)
        return QuantumRational(var, _from_poly(n1 * d2 + n2 * d1), _from_poly(d1 * d2))

    __radd__ = __add__

    def __neg__(self) -> "QuantumRational":
        return QuantumRational(self.variable, tuple(-c for c in self.numerator), self.denominator)

    def __sub__(self, other: Operand) -> "QuantumRational":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Operand) -> "QuantumRational":
        return self._coerce(other) - self

    def __mul__(self, other: Operand) -> "QuantumRational":
        rhs = self._coerce(other)
        var = self._common_variable(rhs)
        n = _to_poly(self.numerator) * _to_poly(rhs.numerator)
        d = _to_poly(self.denominator) * _to_poly(rhs.denominator)
        return QuantumRational(var, _from_poly(n), _from_poly(d))

    __rmul__ = __mul__

    def substitute_inverse(self) -> "QuantumRational":
        """Return f(1/t), reduced.

        Multiplying numerator and denominator by t^m, m = max degree, turns
        f(1/t) into a ratio of coefficient-reversed polynomials.
        """
        m = max(len(self.numerator), len(self.denominator)) - 1
        num = tuple(reversed(self.numerator + (Fraction(0),) * (m + 1 - len(self.numerator))))
        den = tuple(reversed(self.denominator + (Fraction(0),) * (m + 1 - len(self.denominator))))
        return QuantumRational(self.variable, num, den)

    def series(self, order: int) -> List[Fraction]:
        """Coefficients of t^0..t^order of the expansion at t = 0.

        Raises:
            SeriesExpansionError: If D(0) = 0.
        """
        if order < 0:
            raise ValueError(f"order must be nonnegative, got {order}")
        d0 = self.denominator[0] if self.denominator else Fraction(0)
        if d0 == 0:
            raise SeriesExpansionError(f"Denominator of {self} vanishes at 0")

        num = list(self.numerator) + [Fraction(0)] * (order + 1)
        den = self.denominator
        out: List[Fraction] = []
        for k in range(order + 1):
            acc = num[k]
            for j in range(1, min(k, len(den) - 1) + 1):
                acc -= den[j] * out[k - j]
            out.append(acc / d0)
        return out

    # ------------------------------------------------------------------
    # Equality, hashing, serialization
    # ------------------------------------------------------------------

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.is_constant and self.constant_value == other
        if not isinstance(other, QuantumRational):
            return NotImplemented
        if self.is_constant and other.is_constant:
            return self.constant_value == other.constant_value
        return (
            self.variable == other.variable
            and self.numerator == other.numerator
            and self.denominator == other.denominator
        )

    def __hash__(self) -> int:
        if self.is_constant:
            return hash(self.constant_value)
        return hash((self.variable, self.numerator, self.denominator))

    def to_json(self) -> Dict[str, Any]:
        return {
            "var": self.variable,
            "num": [format_rational(c) for c in self.numerator],
            "den": [format_rational(c) for c in self.denominator],
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "QuantumRational":
        return cls(
            data["var"],
            tuple(to_rational(c) for c in data["num"]),
            tuple(to_rational(c) for c in data["den"]),
        )

    def __str__(self) -> str:
        def render(coeffs: Coefficients) -> str:
            if not coeffs:
                return "0"
            terms = []
            for k, c in enumerate(coeffs):
                if c == 0:
                    continue
                mono = "" if k == 0 else (self.variable if k == 1 else f"{self.variable}^{k}")
                if mono and c == 1:
                    terms.append(mono)
                elif mono and c == -1:
                    terms.append(f"-{mono}")
                else:
                    terms.append(f"{format_rational(c)}{'*' + mono if mono else ''}")
            return " + ".join(terms).replace("+ -", "- ")

        if self.denominator == (Fraction(1),):
            return render(self.numerator)
        return f"({render(self.numerator)})/({render(self.denominator)})"

    def __repr__(self) -> str:
        return f"QuantumRational({self.variable!r}, {self})"


def qr_arith(lhs: QuantumRational, rhs: QuantumRational, op: str) -> QuantumRational:
    """Add, subtract or multiply two rational functions of the same ray.

    Args:
        lhs: Left operand.
        rhs: Right operand.
        op: One of "add", "sub", "mul".

    Returns:
        The reduced canonical result.

    Raises:
        VariableMismatchError: If both operands are non-constant in different variables.
    """
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    raise ValueError(f"Unknown operation {op!r}")


def qr_substitute_inverse(f: QuantumRational) -> QuantumRational:
    return f.substitute_inverse()


def series_expand(f: QuantumRational, order: int) -> List[Fraction]:
    return f.series(order)
