"""
Local r-orbi-conifold models and their orbifold quantum invariants.

A LocalModel is one resolution chart W^s or W^sf of
W_r = {xy - z^{2r} + t^2 = 0} / mu_r(a, -a, 1, 0). The Chen-Ruan
cohomology is spanned by

    1, H, Tp, Tq, p_1..p_{r-1}, q_1..q_{r-1}

where Tp, Tq are the Thom classes of the two orbifold points and p_k, q_k
are the twisted sectors. Only multiples of the exceptional curve carry
quantum corrections, and those are packed into a single rational function
of the ray variable t = q^{[Gamma]}.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from ..algebra.quantum import QuantumRational
from ..algebra.rationals import RationalLike, format_rational, to_rational
from ..models.enums import Side, SingularPoint
from ..utils.errors import InvalidModelError, SectorRangeError, UndefinedProductError

logger = logging.getLogger(__name__)

UNIT = "1"
HYPERPLANE = "H"
THOM_P = "Tp"
THOM_Q = "Tq"

# Betti numbers b0..b5 of the link W_{r,1}, which is S^3 x S^2 for every r.
LINK_BETTI_NUMBERS = (1, 0, 1, 1, 0, 1)

UNDEFINED_CLASSICAL = "requires global pairing"


@dataclass(frozen=True)
class LocalModel:
    """One small-resolution chart of a local r-orbi-conifold.

    Attributes:
        r: Order of the cyclic group.
        a: Weight of the action, coprime to r.
        side: Which small resolution (W^s or W^sf).
        ray: Identifier of the Novikov variable of the exceptional curve.
    """

    r: int
    a: int
    side: Side = Side.S
    ray: str = "t"

    @property
    def ray_degree(self) -> int:
        """Degree of H on the exceptional curve: +1 on W^s, -1 on W^sf."""
        return 1 if self.side is Side.S else -1

    def flopped(self) -> "LocalModel":
        return LocalModel(self.r, self.a, self.side.flipped, self.ray)

    def sectors(self) -> List["TwistedSector"]:
        return [TwistedSector(pt, k) for pt in SingularPoint for k in range(1, self.r)]


@dataclass(frozen=True)
class TwistedSector:
    """A twisted sector [p]_k or [q]_k."""

    point: SingularPoint
    k: int

    @property
    def label(self) -> str:
        return f"{self.point.value}_{self.k}"

    @classmethod
    def parse(cls, label: str) -> "TwistedSector":
        try:
            point, k = label.split("_")
            return cls(SingularPoint(point), int(k))
        except ValueError:
            raise SectorRangeError(f"Not a twisted sector label: {label!r}")


@dataclass(frozen=True)
class GWDatum:
    """Genus-zero unmarked invariant of the class d[Gamma]."""

    d: int
    value: Fraction


def validate_model(r: int, a: int, side: Side = Side.S, ray: str = "t") -> LocalModel:
    """Check the parameters of a local model.

    Args:
        r: Group order, at least 1.
        a: Action weight with 1 <= a < r (a = 0 only when r = 1).
        side: Resolution side.
        ray: Novikov variable identifier.

    Returns:
        The validated LocalModel.

    Raises:
        InvalidModelError: If r < 1, a is out of range, or gcd(a, r) != 1.
    """
    if r < 1:
        raise InvalidModelError(f"r must be >= 1, got {r}", field="r")
    if r == 1:
        if a != 0:
            raise InvalidModelError(f"a must be 0 when r = 1, got {a}", field="a")
    elif not 1 <= a < r:
        raise InvalidModelError(f"a must satisfy 1 <= a < {r}, got {a}", field="a")
    if gcd(a, r) != 1:
        raise InvalidModelError(f"gcd(a, r) must be 1, got gcd({a}, {r}) = {gcd(a, r)}", field="a")
    return LocalModel(r=r, a=a, side=Side(side), ray=ray)


def valid_weights(r: int) -> List[int]:
    """All admissible action weights a for a given r."""
    if r < 1:
        raise InvalidModelError(f"r must be >= 1, got {r}", field="r")
    if r == 1:
        return [0]
    return [a for a in range(1, r) if gcd(a, r) == 1]


def degree_shifting(r: int, k: int) -> Fraction:
    """Degree shift 1 + k/r of the sector [.]_k; k = r is the trivial twist (shift 2).

    Raises:
        SectorRangeError: If k is outside 1..r.
    """
    if not 1 <= k <= r:
        raise SectorRangeError(f"k must satisfy 1 <= k <= {r}, got {k}")
    return 1 + Fraction(k, r)


def _check_sector(model: LocalModel, sector: TwistedSector, allow_trivial: bool = False) -> None:
    upper = model.r if allow_trivial else model.r - 1
    if not 1 <= sector.k <= upper:
        raise SectorRangeError(f"sector {sector.label} outside 1..{upper} for r={model.r}")


def cr_basis(model: LocalModel) -> List[Tuple[str, Fraction]]:
    """Ordered Chen-Ruan basis with degrees."""
    basis = [
        (UNIT, Fraction(0)),
        (HYPERPLANE, Fraction(2)),
        (THOM_P, Fraction(6)),
        (THOM_Q, Fraction(6)),
    ]
    for point in SingularPoint:
        for k in range(1, model.r):
            basis.append((f"{point.value}_{k}", degree_shifting(model.r, k)))
    return basis


def is_twisted(label: str) -> bool:
    return "_" in label


def label_degree(model: LocalModel, label: str) -> Fraction:
    for name, degree in cr_basis(model):
        if name == label:
            return degree
    raise SectorRangeError(f"Unknown basis label {label!r} for r={model.r}")


@dataclass(frozen=True)
class CRClass:
    """Element of H*_CR of a local model, as coefficients over the basis.

    Attributes:
        r: Group order (fixes the number of twisted coefficients).
        c_unit: Coefficient of 1.
        c_H: Coefficient of H.
        c_theta_p: Coefficient of Tp.
        c_theta_q: Coefficient of Tq.
        c_p: Coefficients of p_1..p_{r-1}.
        c_q: Coefficients of q_1..q_{r-1}.
    """

    r: int
    c_unit: Fraction = Fraction(0)
    c_H: Fraction = Fraction(0)
    c_theta_p: Fraction = Fraction(0)
    c_theta_q: Fraction = Fraction(0)
    c_p: Tuple[Fraction, ...] = field(default=())
    c_q: Tuple[Fraction, ...] = field(default=())

    def __post_init__(self) -> None:
        width = self.r - 1
        for name in ("c_p", "c_q"):
            coeffs = tuple(to_rational(c) for c in getattr(self, name))
            if not coeffs:
                coeffs = (Fraction(0),) * width
            if len(coeffs) != width:
                raise SectorRangeError(f"{name} must have {width} entries for r={self.r}, got {len(coeffs)}")
            object.__setattr__(self, name, coeffs)
        for name in ("c_unit", "c_H", "c_theta_p", "c_theta_q"):
            object.__setattr__(self, name, to_rational(getattr(self, name)))

    @classmethod
    def zero(cls, r: int) -> "CRClass":
        return cls(r)

    @classmethod
    def from_coefficients(cls, r: int, coefficients: Dict[str, RationalLike]) -> "CRClass":
        """Build from a label -> coefficient mapping; missing labels are 0."""
        c_p = [Fraction(0)] * (r - 1)
        c_q = [Fraction(0)] * (r - 1)
        scalars = {UNIT: Fraction(0), HYPERPLANE: Fraction(0), THOM_P: Fraction(0), THOM_Q: Fraction(0)}
        for label, value in coefficients.items():
            v = to_rational(value)
            if label in scalars:
                scalars[label] += v
                continue
            sector = TwistedSector.parse(label)
            if not 1 <= sector.k <= r - 1:
                raise SectorRangeError(f"sector {label} outside 1..{r - 1}")
            target = c_p if sector.point is SingularPoint.P else c_q
            target[sector.k - 1] += v
        return cls(
            r,
            scalars[UNIT],
            scalars[HYPERPLANE],
            scalars[THOM_P],
            scalars[THOM_Q],
            tuple(c_p),
            tuple(c_q),
        )

    @classmethod
    def basis_element(cls, r: int, label: str, coefficient: RationalLike = 1) -> "CRClass":
        return cls.from_coefficients(r, {label: coefficient})

    def coefficients(self) -> Dict[str, Fraction]:
        """Nonzero coefficients keyed by basis label, in basis order."""
        out: Dict[str, Fraction] = {}
        for label, value in (
            (UNIT, self.c_unit),
            (HYPERPLANE, self.c_H),
            (THOM_P, self.c_theta_p),
            (THOM_Q, self.c_theta_q),
        ):
            if value:
                out[label] = value
        for k, value in enumerate(self.c_p, start=1):
            if value:
                out[f"p_{k}"] = value
        for k, value in enumerate(self.c_q, start=1):
            if value:
                out[f"q_{k}"] = value
        return out

    def terms(self) -> Iterator[Tuple[str, Fraction]]:
        return iter(self.coefficients().items())

    @property
    def is_zero(self) -> bool:
        return not self.coefficients()

    def __add__(self, other: "CRClass") -> "CRClass":
        if other.r != self.r:
            raise SectorRangeError(f"Cannot add classes with r={self.r} and r={other.r}")
        merged = dict(self.coefficients())
        for label, value in other.terms():
            merged[label] = merged.get(label, Fraction(0)) + value
        return CRClass.from_coefficients(self.r, merged)

    def scaled(self, factor: RationalLike) -> "CRClass":
        f = to_rational(factor)
        return CRClass.from_coefficients(self.r, {k: v * f for k, v in self.terms()})

    def to_json(self) -> Dict[str, str]:
        return {label: format_rational(v) for label, v in self.terms()}

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        return " + ".join(f"{format_rational(v)}*{label}" for label, v in self.terms())


def twisting_factor(model: LocalModel, sector: TwistedSector) -> Tuple[int, int, int]:
    """Exponents (b, r - b, k) of the twisting factor Theta_p^b Theta_y^{r-b} Theta_z^k, b = a*k mod r."""
    _check_sector(model, sector)
    b = (model.a * sector.k) % model.r
    return b, model.r - b, sector.k


def twisting_product(model: LocalModel, i: int, j: int, point: SingularPoint = SingularPoint.P) -> Tuple[int, int, int]:
    """Exponent triple of the formal product of the twisting factors of [.]_i and [.]_j.

    The product is the top class (r, r, r) exactly when i + j = r.
    """
    b1, y1, z1 = twisting_factor(model, TwistedSector(point, i))
    b2, y2, z2 = twisting_factor(model, TwistedSector(point, j))
    return b1 + b2, y1 + y2, z1 + z2


def _basis_product(model: LocalModel, x: str, y: str) -> Optional[str]:
    """Product of two basis labels; None encodes 0."""
    if x == UNIT:
        return y
    if y == UNIT:
        return x
    if x == HYPERPLANE and y == HYPERPLANE:
        raise UndefinedProductError("H * H on a local model requires global data")
    if not (is_twisted(x) and is_twisted(y)):
        # H * twisted, Theta * anything of positive degree
        return None
    sx, sy = TwistedSector.parse(x), TwistedSector.parse(y)
    if sx.point is not sy.point or sx.k + sy.k != model.r:
        return None
    return THOM_P if sx.point is SingularPoint.P else THOM_Q


def cr_product(model: LocalModel, x: CRClass, y: CRClass) -> CRClass:
    """Bilinear Chen-Ruan product.

    Raises:
        UndefinedProductError: If both operands have an H component.
    """
    if x.c_H and y.c_H:
        raise UndefinedProductError("H * H on a local model requires global data")
    result: Dict[str, Fraction] = {}
    for lx, cx in x.terms():
        for ly, cy in y.terms():
            label = _basis_product(model, lx, ly)
            if label is not None:
                result[label] = result.get(label, Fraction(0)) + cx * cy
    return CRClass.from_coefficients(model.r, result)


def cr_three_point_twisted(model: LocalModel, inputs: Sequence[str]) -> Fraction:
    """Classical three-point value with at least one twisted input.

    Only Psi([p]_i, [p]_j, 1) and Psi([q]_i, [q]_j, 1) survive, with value delta_{i+j,r}/r.

    Raises:
        UndefinedProductError: If no input is twisted.
    """
    labels = list(inputs)
    if len(labels) != 3:
        raise ValueError(f"Three inputs expected, got {len(labels)}")
    twisted = [lbl for lbl in labels if is_twisted(lbl)]
    if not twisted:
        raise UndefinedProductError("At least one twisted input is required")
    for lbl in twisted:
        _check_sector(model, TwistedSector.parse(lbl))
    untwisted = [lbl for lbl in labels if not is_twisted(lbl)]
    if len(twisted) != 2 or untwisted != [UNIT]:
        return Fraction(0)
    s1, s2 = (TwistedSector.parse(lbl) for lbl in twisted)
    if s1.point is s2.point and s1.k + s2.k == model.r:
        return Fraction(1, model.r)
    return Fraction(0)


def basis_classical(model: LocalModel, labels: Sequence[str]) -> Tuple[Fraction, bool]:
    """Classical three-point value of three basis labels.

    Returns:
        (value, undetermined). ``undetermined`` is True only for (H, H, H), whose
        integral is not defined on the non-compact model; value is then 0.
    """
    if any(is_twisted(lbl) for lbl in labels):
        return cr_three_point_twisted(model, labels), False
    ordered = sorted(labels)
    if ordered == [HYPERPLANE] * 3:
        return Fraction(0), True
    if ordered in ([UNIT, UNIT, THOM_P], [UNIT, UNIT, THOM_Q]):
        return Fraction(1, model.r), False
    # remaining untwisted triples have total degree != 6
    return Fraction(0), False


def cr_pairing(model: LocalModel, x: CRClass, y: CRClass) -> Fraction:
    """Pairing <x, y> = Psi_CR(x, y, 1) on the part where it is defined."""
    total = Fraction(0)
    for lx, cx in x.terms():
        for ly, cy in y.terms():
            value, _ = basis_classical(model, (lx, ly, UNIT))
            total += cx * cy * value
    return total


def virtual_dimension(model: LocalModel, d: int, sectors: Sequence[TwistedSector]) -> Fraction:
    """Virtual dimension k - sum(1 + k_i/r) of genus-zero maps with k orbifold points.

    Sectors may use k_i = r (trivial twist, shift 2) for nodal bookkeeping.
    """
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    for sector in sectors:
        _check_sector(model, sector, allow_trivial=True)
    return len(sectors) - sum((degree_shifting(model.r, s.k) for s in sectors), Fraction(0))


def nodal_partner(model: LocalModel, sector: TwistedSector) -> TwistedSector:
    """Sector on the other branch of an orbifold node: [.]_k pairs with [.]_{r-k} (k = r pairs with r)."""
    _check_sector(model, sector, allow_trivial=True)
    partner = model.r if sector.k == model.r else model.r - sector.k
    return TwistedSector(sector.point, partner)


def top_stratum_empty(model: LocalModel, d: int, sectors: Sequence[TwistedSector]) -> bool:
    """Whether maps from a smooth sphere with these orbifold points cannot exist.

    True for a single orbifold point (non-integral dimension) and whenever the
    virtual dimension is negative.
    """
    if not sectors:
        return not moduli_nonempty(model, d)
    dim = virtual_dimension(model, d, sectors)
    return len(sectors) == 1 or dim.denominator != 1 or dim < 0


def moduli_nonempty(model: LocalModel, d: int) -> bool:
    """Stable maps of class d[Gamma] without orbifold points exist iff r | d."""
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    return d % model.r == 0


def gw_invariant(model: LocalModel, d: int) -> Fraction:
    """Unmarked genus-zero invariant of d[Gamma]: 1/m^3 for d = m*r, else 0."""
    if not moduli_nonempty(model, d):
        return Fraction(0)
    m = d // model.r
    return Fraction(1, m**3)


def gw_uniformizing_cover(model: LocalModel, m: int) -> Fraction:
    """Invariant r/m^3 of m times the exceptional curve on the uniformizing cover."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    return Fraction(model.r, m**3)


def gw_twisted(model: LocalModel, d: int, sectors: Sequence[TwistedSector]) -> Fraction:
    """Invariants with at least one orbifold marked point vanish (negative virtual dimension)."""
    if not sectors:
        raise ValueError("gw_twisted needs at least one sector")
    dim = virtual_dimension(model, d, sectors)
    logger.debug(f"gw_twisted r={model.r} d={d} k={len(sectors)} vdim={dim}")
    return Fraction(0)


def gw_table(model: LocalModel, max_d: int) -> List[GWDatum]:
    return [GWDatum(d, gw_invariant(model, d)) for d in range(1, max_d + 1)]


@dataclass(frozen=True)
class ThreePointValue:
    """Three-point function split into classical and quantum parts.

    Attributes:
        classical: Sum of the classical contributions that the local model determines.
        undetermined: Coefficient of the (H, H, H) integral, which needs global data.
        quantum: Multiple-cover correction as a rational function of the ray variable.
    """

    classical: Fraction
    undetermined: Fraction
    quantum: QuantumRational

    @property
    def classical_symbol(self) -> Optional[str]:
        if not self.undetermined:
            return None
        return f"{format_rational(self.undetermined)}*<H,H,H> ({UNDEFINED_CLASSICAL})"

    def to_json(self) -> Dict[str, object]:
        return {
            "classical": format_rational(self.classical),
            "classical_symbol": self.classical_symbol,
            "quantum": self.quantum.to_json(),
        }


def curve_pairing(model: LocalModel, beta: CRClass) -> Fraction:
    """beta(r * Gamma): only the H component pairs with the curve."""
    return model.r * model.ray_degree * beta.c_H


def quantum_three_point(model: LocalModel, b1: CRClass, b2: CRClass, b3: CRClass) -> ThreePointValue:
    """Three-point function Psi^{W}(b1, b2, b3), extended multilinearly over the basis.

    Only the H components feed the quantum part:
    b1(r Gamma) b2(r Gamma) b3(r Gamma) * t^r / (1 - t^r).
    """
    classical = Fraction(0)
    undetermined = Fraction(0)
    for l1, c1 in b1.terms():
        for l2, c2 in b2.terms():
            for l3, c3 in b3.terms():
                value, open_integral = basis_classical(model, (l1, l2, l3))
                if open_integral:
                    undetermined += c1 * c2 * c3
                else:
                    classical += c1 * c2 * c3 * value

    weight = curve_pairing(model, b1) * curve_pairing(model, b2) * curve_pairing(model, b3)
    if weight:
        quantum = QuantumRational.multiple_cover(model.ray, model.r, weight)
    else:
        quantum = QuantumRational.zero(model.ray)
    return ThreePointValue(classical, undetermined, quantum)


def quantum_series_oracle(model: LocalModel, b1: CRClass, b2: CRClass, b3: CRClass, order: int) -> List[Fraction]:
    """Direct sum over d <= order of b1(dGamma) b2(dGamma) b3(dGamma) * gw(d) * t^d."""
    unit = model.ray_degree
    coeffs = [Fraction(0)] * (order + 1)
    for d in range(1, order + 1):
        gw = gw_invariant(model, d)
        if gw:
            coeffs[d] = (d * unit * b1.c_H) * (d * unit * b2.c_H) * (d * unit * b3.c_H) * gw
    return coeffs


def link_betti_numbers() -> Tuple[int, ...]:
    """Betti numbers b0..b5 of the link of the singular point."""
    return LINK_BETTI_NUMBERS


def product_table(model: LocalModel) -> Dict[Tuple[str, str], Optional[CRClass]]:
    """Products of all pairs of basis classes; None marks H * H, which needs global data."""
    labels = [label for label, _ in cr_basis(model)]
    table: Dict[Tuple[str, str], Optional[CRClass]] = {}
    for x in labels:
        for y in labels:
            try:
                table[(x, y)] = cr_product(
                    model,
                    CRClass.basis_element(model.r, x),
                    CRClass.basis_element(model.r, y),
                )
            except UndefinedProductError:
                table[(x, y)] = None
    return table
