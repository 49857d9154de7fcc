"""Exact rational matrices, null spaces and inverses."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import List, Optional, Sequence, Tuple

import sympy as sp

from .rationals import RationalLike, format_rational, to_rational

logger = logging.getLogger(__name__)

Vector = Tuple[Fraction, ...]


@dataclass(frozen=True)
class RationalMatrix:
    """Rectangular matrix of reduced Fractions.

    Attributes:
        rows: Row count.
        cols: Column count.
        entries: Row-major entries, ``len(entries) == rows`` and every row has ``cols`` items.
    """

    rows: int
    cols: int
    entries: Tuple[Vector, ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows:
            raise ValueError(f"Expected {self.rows} rows, got {len(self.entries)}")
        for i, row in enumerate(self.entries):
            if len(row) != self.cols:
                raise ValueError(f"Row {i} has {len(row)} entries, expected {self.cols}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[RationalLike]], cols: Optional[int] = None) -> "RationalMatrix":
        """Build from nested rows; ``cols`` is required only for a matrix with no rows."""
        entries = tuple(tuple(to_rational(v) for v in row) for row in rows)
        if cols is None:
            if not entries:
                raise ValueError("cols is required for a matrix with no rows")
            cols = len(entries[0])
        return cls(len(entries), cols, entries)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls.from_rows([[0] * cols for _ in range(rows)], cols=cols)

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.entries)

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix.from_rows([self.column(j) for j in range(self.cols)], cols=self.rows)

    def apply(self, v: Sequence[Fraction]) -> Vector:
        if len(v) != self.cols:
            raise ValueError(f"Vector of length {len(v)} does not match {self.cols} columns")
        return tuple(sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in self.entries)

    def scale_columns(self, factors: Sequence[RationalLike]) -> "RationalMatrix":
        fs = [to_rational(f) for f in factors]
        return RationalMatrix.from_rows(
            [[v * f for v, f in zip(row, fs)] for row in self.entries], cols=self.cols
        )

    def to_sympy(self) -> sp.Matrix:
        return sp.Matrix(
            self.rows,
            self.cols,
            [sp.Rational(v.numerator, v.denominator) for row in self.entries for v in row],
        )

    @classmethod
    def from_sympy(cls, m: sp.Matrix) -> "RationalMatrix":
        return cls.from_rows(
            [[Fraction(int(sp.Rational(m[i, j]).p), int(sp.Rational(m[i, j]).q)) for j in range(m.cols)]
             for i in range(m.rows)],
            cols=m.cols,
        )

    def to_json(self) -> List[List[str]]:
        return [[format_rational(v) for v in row] for row in self.entries]


def primitive(v: Sequence[Fraction]) -> Vector:
    """Scale a nonzero rational vector to coprime integers with a positive leading entry."""
    den = reduce(lcm, (x.denominator for x in v), 1)
    ints = [int(x * den) for x in v]
    g = reduce(gcd, (abs(x) for x in ints), 0) or 1
    ints = [x // g for x in ints]
    lead = next((x for x in ints if x != 0), 1)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(Fraction(x) for x in ints)


def rank(m: RationalMatrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return int(m.to_sympy().rank())


def kernel(m: RationalMatrix) -> List[Vector]:
    """Exact basis of {v : Mv = 0}.

    Elimination runs in sympy over the rationals; each basis vector is
    returned in primitive integer form. The list is empty iff the kernel is trivial.
    """
    if m.cols == 0:
        return []
    if m.rows == 0:
        return list(RationalMatrix.identity(m.cols).entries)

    basis = []
    for vec in m.to_sympy().nullspace():
        v = tuple(Fraction(int(sp.Rational(x).p), int(sp.Rational(x).q)) for x in vec)
        basis.append(primitive(v))
    logger.debug(f"kernel of {m.rows}x{m.cols} matrix has dimension {len(basis)}")
    return basis


def inverse(m: RationalMatrix) -> RationalMatrix:
    """Exact inverse of a square matrix.

    Raises:
        ValueError: If the matrix is not square or is singular.
    """
    if m.rows != m.cols:
        raise ValueError(f"Cannot invert a {m.rows}x{m.cols} matrix")
    sm = m.to_sympy()
    if sm.det() == 0:
        raise ValueError("Matrix is singular")
    return RationalMatrix.from_sympy(sm.inv())
