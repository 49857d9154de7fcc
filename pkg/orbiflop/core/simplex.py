"""Exact phase-one simplex over the rationals."""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

logger = logging.getLogger(__name__)


@dataclass
class PhaseOneTableau:
    """Tableau for {A w = b, w >= 0} with one artificial variable per row.

    Columns 0..n-1 are the original variables and n..n+m-1 the artificials.
    Entering and leaving variables follow Bland's rule, so the method
    terminates without cycling.

    Attributes:
        rows: Constraint rows [A | I], already sign-normalised so b >= 0.
        rhs: Right-hand side b.
        basis: Basic variable of each row.
        reduced: Reduced costs of the phase-one objective (sum of artificials).
    """

    n: int
    rows: List[List[Fraction]]
    rhs: List[Fraction]
    basis: List[int] = field(default_factory=list)
    reduced: List[Fraction] = field(default_factory=list)
    pivots: int = 0

    @classmethod
    def build(cls, a: Sequence[Sequence[Fraction]], b: Sequence[Fraction], n: int) -> "PhaseOneTableau":
        m = len(a)
        rows: List[List[Fraction]] = []
        rhs: List[Fraction] = []
        for i, (row, value) in enumerate(zip(a, b)):
            sign = -1 if value < 0 else 1
            ident = [Fraction(1) if k == i else Fraction(0) for k in range(m)]
            rows.append([sign * Fraction(x) for x in row] + ident)
            rhs.append(sign * Fraction(value))
        reduced = [-sum((rows[i][j] for i in range(m)), Fraction(0)) for j in range(n)] + [Fraction(0)] * m
        return cls(n=n, rows=rows, rhs=rhs, basis=[n + i for i in range(m)], reduced=reduced)

    def _pivot(self, i: int, j: int) -> None:
        piv = self.rows[i][j]
        self.rows[i] = [x / piv for x in self.rows[i]]
        self.rhs[i] /= piv
        for k, row in enumerate(self.rows):
            if k != i and row[j] != 0:
                f = row[j]
                self.rows[k] = [x - f * y for x, y in zip(row, self.rows[i])]
                self.rhs[k] -= f * self.rhs[i]
        f = self.reduced[j]
        self.reduced = [x - f * y for x, y in zip(self.reduced, self.rows[i])]
        self.basis[i] = j
        self.pivots += 1

    def _step(self) -> bool:
        entering = next((j for j, d in enumerate(self.reduced) if d < 0), None)
        if entering is None:
            return False
        candidates = [
            (self.rhs[i] / row[entering], self.basis[i], i)
            for i, row in enumerate(self.rows)
            if row[entering] > 0
        ]
        # phase one is bounded below, so a negative reduced cost always has a positive column entry
        _, _, leaving = min(candidates)
        self._pivot(leaving, entering)
        return True

    def solve(self) -> Optional[List[Fraction]]:
        """Run to optimality; return a feasible w, or None if the system is infeasible."""
        while self._step():
            pass
        infeasibility = sum(
            (self.rhs[i] for i, var in enumerate(self.basis) if var >= self.n),
            Fraction(0),
        )
        logger.debug(f"Phase one finished after {self.pivots} pivots, residual {infeasibility}")
        if infeasibility != 0:
            return None
        w = [Fraction(0)] * self.n
        for i, var in enumerate(self.basis):
            if var < self.n:
                w[var] = self.rhs[i]
        return w


def find_feasible(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction], n: int) -> Optional[List[Fraction]]:
    """Exact point of {w in Q^n : A w = b, w >= 0}, or None when empty.

    Args:
        a: Constraint rows, each of length n.
        b: Right-hand side, one entry per row.
        n: Number of variables.

    Returns:
        A vertex of the feasible region, or None.
    """
    if not a:
        return [Fraction(0)] * n
    return PhaseOneTableau.build(a, b, n).solve()
