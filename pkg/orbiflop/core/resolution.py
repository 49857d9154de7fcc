"""
Symplectic small resolutions of a global orbi-conifold.

A small resolution choosing W^s or W^sf at each of the kappa singular points
carries a symplectic structure exactly when the vanishing Thom classes
satisfy sum_i lambda_i Theta_i = 0 with every lambda_i nonzero and of the
sign the choice prescribes. With Theta stored as the columns of M, that is
a sign-constrained kernel vector of M.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Set, Tuple, Union

import numpy as np

from ..algebra.matrices import RationalMatrix, Vector, kernel
from ..algebra.rationals import format_rational
from ..config import get_settings
from ..models.enums import Side
from ..models.schemas import ConifoldConfig, PatternVerdict, ResolutionReport
from ..utils.errors import EnumerationCapError
from .simplex import find_feasible

logger = logging.getLogger(__name__)

MatrixInput = Union[ConifoldConfig, RationalMatrix]


@dataclass(frozen=True, order=True)
class SignPattern:
    """Prescribed signs of (lambda_1, ..., lambda_kappa)."""

    signs: Tuple[int, ...]

    def __post_init__(self) -> None:
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError(f"Signs must be +1 or -1, got {self.signs}")

    @classmethod
    def from_mask(cls, mask: int, kappa: int) -> "SignPattern":
        return cls(tuple(-1 if mask & (1 << j) else 1 for j in range(kappa)))

    def __neg__(self) -> "SignPattern":
        return SignPattern(tuple(-s for s in self.signs))

    def __len__(self) -> int:
        return len(self.signs)

    def __str__(self) -> str:
        return "(" + ",".join("+" if s > 0 else "-" for s in self.signs) + ")"


@dataclass(frozen=True)
class ResolutionChoice:
    """W^s or W^sf at each singular point."""

    sides: Tuple[Side, ...]

    @classmethod
    def from_pattern(cls, pattern: SignPattern) -> "ResolutionChoice":
        """lambda_i < 0 selects W^s at p_i, lambda_i > 0 selects W^sf."""
        return cls(tuple(Side.S if s < 0 else Side.SF for s in pattern.signs))

    def __str__(self) -> str:
        return "(" + ", ".join(side.value for side in self.sides) + ")"


def _matrix(source: MatrixInput) -> RationalMatrix:
    return source.theta_matrix() if isinstance(source, ConifoldConfig) else source


def pattern_certificate(m: RationalMatrix, sigma: SignPattern) -> Optional[Vector]:
    """Exact v with Mv = 0 and sigma_i v_i >= 1, or None.

    Writing v_i = sigma_i (1 + w_i) turns the question into phase-one
    feasibility of {A w = b, w >= 0} with A_ij = M_ij sigma_j and
    b_i = -sum_j M_ij sigma_j.
    """
    if len(sigma) != m.cols:
        raise ValueError(f"Pattern of length {len(sigma)} for a matrix with {m.cols} columns")
    scaled = m.scale_columns(sigma.signs)
    a = [list(row) for row in scaled.entries]
    b = [-sum(row, Fraction(0)) for row in scaled.entries]
    w = find_feasible(a, b, m.cols)
    if w is None:
        return None
    v = tuple(s * (1 + x) for s, x in zip(sigma.signs, w))
    if any(value != 0 for value in m.apply(v)):
        raise ArithmeticError(f"Certificate {v} is not in the kernel")
    return v


def pattern_feasible(m: RationalMatrix, sigma: SignPattern) -> bool:
    """True iff some v in ker M has sigma_i v_i >= 1 for every i."""
    return pattern_certificate(m, sigma) is not None


def _check_cap(kappa: int, max_kappa: Optional[int]) -> None:
    cap = max_kappa if max_kappa is not None else get_settings().max_kappa
    if kappa > cap:
        raise EnumerationCapError(kappa, cap)


def feasible_certificates(source: MatrixInput, max_kappa: Optional[int] = None) -> Dict[SignPattern, Vector]:
    """Every feasible pattern with an exact kernel certificate.

    Only patterns with a leading + are solved; the negation of a certificate
    certifies the negated pattern.

    Raises:
        EnumerationCapError: If kappa exceeds the enumeration cap.
    """
    m = _matrix(source)
    kappa = m.cols
    _check_cap(kappa, max_kappa)

    found: Dict[SignPattern, Vector] = {}
    for mask in range(2 ** (kappa - 1) if kappa else 0):
        sigma = SignPattern.from_mask(mask << 1, kappa)
        v = pattern_certificate(m, sigma)
        if v is not None:
            found[sigma] = v
            found[-sigma] = tuple(-x for x in v)
    logger.info(f"{len(found)} of {2 ** kappa} sign patterns feasible for kappa={kappa}")
    return dict(sorted(found.items(), reverse=True))


def feasible_patterns(source: MatrixInput, max_kappa: Optional[int] = None) -> Set[SignPattern]:
    return set(feasible_certificates(source, max_kappa))


def symplectic_resolutions(source: MatrixInput, max_kappa: Optional[int] = None) -> List[ResolutionChoice]:
    """Small resolutions admitting a symplectic structure, one per feasible pattern."""
    return [ResolutionChoice.from_pattern(p) for p in feasible_certificates(source, max_kappa)]


def sampling_oracle(
    m: RationalMatrix,
    trials: int,
    seed: int,
    coefficient_bound: Optional[int] = None,
) -> Set[SignPattern]:
    """Sign patterns of random integer combinations of a kernel basis with no zero entry.

    Every returned pattern is feasible, so the result is a subset of
    feasible_patterns(m).
    """
    bound = coefficient_bound if coefficient_bound is not None else get_settings().oracle_coefficient_bound
    basis = kernel(m)
    if not basis:
        return set()
    # kernel() returns primitive integer vectors, so integer combinations stay exact
    b = np.array([[int(x) for x in vec] for vec in basis], dtype=object)
    rng = np.random.default_rng(seed)
    coeffs = rng.integers(-bound, bound + 1, size=(trials, len(basis))).astype(object)
    combos = coeffs.dot(b) if trials else np.zeros((0, m.cols), dtype=object)
    seen: Set[SignPattern] = set()
    for v in combos:
        if all(x != 0 for x in v):
            seen.add(SignPattern(tuple(1 if x > 0 else -1 for x in v)))
    logger.debug(f"sampling_oracle found {len(seen)} patterns in {trials} trials")
    return seen


def resolve(config: ConifoldConfig, max_kappa: Optional[int] = None) -> ResolutionReport:
    """Feasible patterns, their resolution choices and certificates for a config."""
    m = config.theta_matrix()
    certificates = feasible_certificates(m, max_kappa)
    return ResolutionReport(
        kappa=config.kappa,
        kernel_dimension=len(kernel(m)),
        feasible=[
            PatternVerdict(
                signs=list(p.signs),
                choice=[side.value for side in ResolutionChoice.from_pattern(p).sides],
                certificate=[format_rational(x) for x in v],
            )
            for p, v in certificates.items()
        ],
    )
