"""
Flop engine: the class map phi, the local flop identity and the global Ruan ring.

Values of three-point functions on a global orbifold live in
Q + sum_i Q(t_i), one rational function per extremal ray. A flop inverts the
Novikov variable of each flopped ray, so comparing X-side and Y-side values
means substituting t -> 1/t on the Y side and renaming rays through the
correspondence.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, product
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from ..algebra.matrices import inverse
from ..algebra.quantum import QuantumRational, qr_substitute_inverse
from ..algebra.rationals import RationalLike, format_rational, to_rational
from ..models.enums import Side
from ..models.schemas import (
    AssociativityReport,
    FlopCheckReport,
    FlopCorrespondence,
    GlobalRingData,
    IsomorphismReport,
    Mismatch,
    TripleCheck,
)
from ..utils.errors import CorrespondenceError, RingDataError, SingularPairingError
from .local_model import CRClass, LocalModel, cr_basis, quantum_three_point, validate_model

logger = logging.getLogger(__name__)

ClassVector = Dict[str, Fraction]


@dataclass(frozen=True)
class QuantumCorrectedValue:
    """Classical constant plus one rational-function correction per ray.

    Two values are equal when, for every ray, their corrections differ by a
    constant and those constants together with the classical difference sum
    to zero.
    """

    classical: Fraction
    quantum: Dict[str, QuantumRational] = field(default_factory=dict)

    @classmethod
    def constant(cls, value: RationalLike) -> "QuantumCorrectedValue":
        return cls(to_rational(value), {})

    def __add__(self, other: "QuantumCorrectedValue") -> "QuantumCorrectedValue":
        merged = dict(self.quantum)
        for ray, value in other.quantum.items():
            merged[ray] = merged[ray] + value if ray in merged else value
        return QuantumCorrectedValue(self.classical + other.classical, merged)

    def __neg__(self) -> "QuantumCorrectedValue":
        return QuantumCorrectedValue(-self.classical, {ray: -q for ray, q in self.quantum.items()})

    def __sub__(self, other: "QuantumCorrectedValue") -> "QuantumCorrectedValue":
        return self + (-other)

    def scaled(self, factor: RationalLike) -> "QuantumCorrectedValue":
        f = to_rational(factor)
        return QuantumCorrectedValue(self.classical * f, {ray: q * f for ray, q in self.quantum.items()})

    def difference_constant(self) -> Optional[Fraction]:
        """The value as a constant, or None if some ray part is not constant."""
        total = self.classical
        for q in self.quantum.values():
            if not q.is_constant:
                return None
            total += q.constant_value
        return total

    def matches(self, other: "QuantumCorrectedValue") -> bool:
        return (self - other).difference_constant() == 0

    def transported(self, ray_map: Mapping[str, str]) -> "QuantumCorrectedValue":
        """Invert and rename each flopped ray variable.

        Raises:
            CorrespondenceError: If a ray with a nonconstant part is not in ray_map.
        """
        out: Dict[str, QuantumRational] = {}
        for ray, q in self.quantum.items():
            if q.is_zero:
                continue
            if ray not in ray_map:
                raise CorrespondenceError(f"Ray {ray!r} is missing from the correspondence", field="ray_map")
            target = ray_map[ray]
            out[target] = qr_substitute_inverse(q).renamed(target)
        return QuantumCorrectedValue(self.classical, out)

    def evaluate(self, points: Mapping[str, Fraction]) -> Fraction:
        total = self.classical
        for ray, q in self.quantum.items():
            total += q.evaluate(points[ray])
        return total

    def __str__(self) -> str:
        parts = [format_rational(self.classical)]
        for ray in sorted(self.quantum):
            if not self.quantum[ray].is_zero:
                parts.append(f"[{ray}] {self.quantum[ray]}")
        return " + ".join(parts)


# ----------------------------------------------------------------------
# Correspondences and phi
# ----------------------------------------------------------------------


def local_correspondence(model: LocalModel) -> FlopCorrespondence:
    """Identification H*_CR(W^sf) -> H*_CR(W^s): each basis label goes to its namesake."""
    labels = [label for label, _ in cr_basis(model)]
    return FlopCorrespondence.identity(labels, [model.ray])


def phi_map(
    correspondence: FlopCorrespondence,
    c: Union[CRClass, Mapping[str, RationalLike]],
) -> Union[CRClass, ClassVector]:
    """Transport a Y-side class to the X side through the class map.

    Args:
        correspondence: The flop correspondence (Y labels -> X labels).
        c: A local CRClass or a label -> coefficient vector.

    Returns:
        The image, of the same kind as the input.

    Raises:
        CorrespondenceError: If a label of the input is not mapped.
    """
    terms = dict(c.terms()) if isinstance(c, CRClass) else {k: to_rational(v) for k, v in c.items()}
    image: ClassVector = {}
    for label, value in terms.items():
        if label not in correspondence.class_map:
            raise CorrespondenceError(f"Label {label!r} is missing from the correspondence", field="class_map")
        target = correspondence.class_map[label]
        image[target] = image.get(target, Fraction(0)) + value
    if isinstance(c, CRClass):
        return CRClass.from_coefficients(c.r, image)
    return {k: v for k, v in image.items() if v}


# ----------------------------------------------------------------------
# Local flop identity
# ----------------------------------------------------------------------


def _basis_triples(model: LocalModel) -> List[Tuple[CRClass, CRClass, CRClass]]:
    labels = [label for label, _ in cr_basis(model)]
    return [
        tuple(CRClass.basis_element(model.r, label) for label in triple)
        for triple in combinations_with_replacement(labels, 3)
    ]


def _triple_label(triple: Sequence[CRClass]) -> List[str]:
    return [str(c) for c in triple]


def local_flop_check(
    r: int,
    a: int,
    triples: Optional[Iterable[Tuple[CRClass, CRClass, CRClass]]] = None,
) -> FlopCheckReport:
    """Check Psi^{W^s}(phi b) = Psi^{W^sf}(b) over triples of W^sf classes.

    The classical difference combines the determined constants with the
    integral of H^3, which differs by b1(r Gamma) b2(r Gamma) b3(r Gamma)
    between the two sides. The quantum parts are compared after t -> 1/t on
    the W^sf side.

    Args:
        r: Group order.
        a: Action weight.
        triples: Triples of W^sf classes; every basis triple when omitted.

    Returns:
        FlopCheckReport with one entry per triple.
    """
    model_s = validate_model(r, a, Side.S)
    model_sf = model_s.flopped()
    corr = local_correspondence(model_sf)
    ray_map = corr.ray_map

    report = FlopCheckReport(r=r, a=a)
    for triple in triples if triples is not None else _basis_triples(model_sf):
        image = [phi_map(corr, c) for c in triple]
        on_s = quantum_three_point(model_s, *image)
        on_sf = quantum_three_point(model_sf, *triple)

        # int (H^s)^3 - int (H^sf)^3 = (r Gamma)^3 per unit of H in each slot
        h_weight = Fraction(1)
        for c in image:
            h_weight *= r * c.c_H
        classical = on_s.classical - on_sf.classical + h_weight
        comparable = on_s.undetermined == on_sf.undetermined

        quantum = on_s.quantum - qr_substitute_inverse(on_sf.quantum).renamed(ray_map[model_sf.ray])
        constant = quantum.constant_value if quantum.is_constant and comparable else None
        total = classical + constant if constant is not None else None
        passed = total == 0

        report.triples.append(
            TripleCheck(
                inputs=_triple_label(triple),
                classical_difference=format_rational(classical),
                quantum_difference=str(quantum),
                total=format_rational(total) if total is not None else f"{format_rational(classical)} + {quantum}",
                passed=passed,
            )
        )
        if not passed:
            logger.warning(f"Flop identity fails for r={r} a={a} at {_triple_label(triple)}")

    report.passed = all(t.passed for t in report.triples)
    logger.info(f"local_flop_check r={r} a={a}: {len(report.triples)} triples, passed={report.passed}")
    return report


# ----------------------------------------------------------------------
# Global Ruan ring
# ----------------------------------------------------------------------


def _as_vector(ring: GlobalRingData, b: Mapping[str, RationalLike]) -> ClassVector:
    known = set(ring.labels)
    out: ClassVector = {}
    for label, value in b.items():
        if label not in known:
            raise RingDataError(f"Label {label!r} is not in the basis", field="basis")
        v = to_rational(value)
        if v:
            out[label] = v
    return out


def basis_vector(label: str) -> ClassVector:
    return {label: Fraction(1)}


def ruan_three_point(
    ring: GlobalRingData,
    b1: Mapping[str, RationalLike],
    b2: Mapping[str, RationalLike],
    b3: Mapping[str, RationalLike],
) -> QuantumCorrectedValue:
    """Quantum-corrected three-point function Psi_qc(b1, b2, b3).

    The classical part is read from the constant table. For each ray i the
    correction is prod_j b_j(r_i Gamma_i) * t_i^{r_i} / (1 - t_i^{r_i}), where
    only degree-2 classes whose support meets the ray pair with Gamma_i.

    Raises:
        RingDataError: If an input uses a label outside the basis.
    """
    vectors = [_as_vector(ring, b) for b in (b1, b2, b3)]

    classical = Fraction(0)
    for (l1, c1), (l2, c2), (l3, c3) in product(*(v.items() for v in vectors)):
        classical += c1 * c2 * c3 * ring.classical(l1, l2, l3)

    quantum: Dict[str, QuantumRational] = {}
    for ray, r_i in ring.multiplicities.items():
        weight = Fraction(1)
        for vec in vectors:
            pairing = Fraction(0)
            for label, c in vec.items():
                support = ring.supports[label]
                if support is not None and ray not in support:
                    continue
                pairing += c * ring.ray_value(label, ray)
            weight *= r_i * pairing
            if not weight:
                break
        if weight:
            quantum[ray] = QuantumRational.multiple_cover(ray, r_i, weight)
    return QuantumCorrectedValue(classical, quantum)


def ruan_structure_constants(ring: GlobalRingData) -> Dict[Tuple[str, str], Dict[str, QuantumCorrectedValue]]:
    """Structure constants of the Ruan product: b_i * b_j = sum_k C[(i, j)][k] b_k.

    Solves <b_i * b_j, b_l> = Psi_qc(b_i, b_j, b_l) against the pairing matrix.

    Raises:
        SingularPairingError: If the pairing matrix is singular.
    """
    labels = ring.labels
    try:
        g_inv = inverse(ring.pairing_matrix())
    except ValueError as e:
        raise SingularPairingError(f"Pairing matrix cannot be inverted: {e}")

    constants: Dict[Tuple[str, str], Dict[str, QuantumCorrectedValue]] = {}
    for i, li in enumerate(labels):
        for lj in labels[i:]:
            psi = [ruan_three_point(ring, basis_vector(li), basis_vector(lj), basis_vector(ll)) for ll in labels]
            row: Dict[str, QuantumCorrectedValue] = {}
            for k, lk in enumerate(labels):
                acc = QuantumCorrectedValue.constant(0)
                for l_idx, value in enumerate(psi):
                    coeff = g_inv.entries[l_idx][k]
                    if coeff:
                        acc = acc + value.scaled(coeff)
                row[lk] = acc
            constants[(li, lj)] = row
            constants[(lj, li)] = row
    logger.debug(f"Computed structure constants for {len(labels)} basis classes")
    return constants


def _check_correspondence(ring_x: GlobalRingData, ring_y: GlobalRingData, corr: FlopCorrespondence) -> None:
    if len(ring_x.labels) != len(ring_y.labels):
        raise CorrespondenceError(
            f"Basis sizes differ: X has {len(ring_x.labels)}, Y has {len(ring_y.labels)}",
            field="basis",
        )
    if set(corr.class_map) != set(ring_y.labels):
        missing = sorted(set(ring_y.labels) - set(corr.class_map))
        raise CorrespondenceError(f"Correspondence does not cover Y basis: {missing}", field="class_map")
    if set(corr.class_map.values()) != set(ring_x.labels):
        missing = sorted(set(ring_x.labels) - set(corr.class_map.values()))
        raise CorrespondenceError(f"Correspondence does not cover X basis: {missing}", field="class_map")
    for y_label, x_label in corr.class_map.items():
        if ring_y.degrees[y_label] != ring_x.degrees[x_label]:
            raise CorrespondenceError(
                f"{y_label!r} (degree {ring_y.degrees[y_label]}) maps to {x_label!r} "
                f"(degree {ring_x.degrees[x_label]})",
                field="class_map",
            )
    for y_ray, x_ray in corr.ray_map.items():
        if y_ray not in ring_y.multiplicities or x_ray not in ring_x.multiplicities:
            raise CorrespondenceError(f"Ray map {y_ray!r} -> {x_ray!r} refers to unknown rays", field="ray_map")


def check_pairing_compatibility(
    ring_x: GlobalRingData,
    ring_y: GlobalRingData,
    corr: FlopCorrespondence,
) -> bool:
    """True iff <phi a, phi b>_X = <a, b>_Y for every pair of Y basis classes."""
    gx, gy = ring_x.pairing_matrix(), ring_y.pairing_matrix()
    index_x = {label: i for i, label in enumerate(ring_x.labels)}
    for i, ly in enumerate(ring_y.labels):
        for j, my in enumerate(ring_y.labels):
            lx, mx = corr.class_map.get(ly), corr.class_map.get(my)
            if lx not in index_x or mx not in index_x:
                return False
            if gx.entries[index_x[lx]][index_x[mx]] != gy.entries[i][j]:
                return False
    return True


def verify_ruan_isomorphism(
    ring_x: GlobalRingData,
    ring_y: GlobalRingData,
    corr: FlopCorrespondence,
) -> IsomorphismReport:
    """Compare the Ruan rings of X and Y through a flop correspondence.

    Every three-point value and every structure constant of Y is transported
    (t_i -> 1/t_i, rays renamed) and compared with its X counterpart.

    Raises:
        CorrespondenceError: If the correspondence does not cover both bases
            or changes degrees.
        SingularPairingError: If either pairing cannot be inverted.
    """
    _check_correspondence(ring_x, ring_y, corr)
    report = IsomorphismReport(pairing_compatible=check_pairing_compatibility(ring_x, ring_y, corr))
    class_map = corr.class_map

    for triple in combinations_with_replacement(ring_y.labels, 3):
        y_value = ruan_three_point(ring_y, *(basis_vector(label) for label in triple)).transported(corr.ray_map)
        x_value = ruan_three_point(ring_x, *(basis_vector(class_map[label]) for label in triple))
        report.triples_checked += 1
        if not x_value.matches(y_value):
            report.three_point_mismatches.append(
                Mismatch(inputs=list(triple), x_value=str(x_value), y_value=str(y_value))
            )

    if report.pairing_compatible:
        cx = ruan_structure_constants(ring_x)
        cy = ruan_structure_constants(ring_y)
        for (li, lj), row in cy.items():
            if ring_y.labels.index(li) > ring_y.labels.index(lj):
                continue
            x_row = cx[(class_map[li], class_map[lj])]
            for lk, y_value in row.items():
                x_value = x_row[class_map[lk]]
                if not x_value.matches(y_value.transported(corr.ray_map)):
                    report.structure_constant_mismatches.append(
                        Mismatch(inputs=[li, lj, lk], x_value=str(x_value), y_value=str(y_value))
                    )

    report.passed = (
        report.pairing_compatible
        and not report.three_point_mismatches
        and not report.structure_constant_mismatches
    )
    logger.info(
        f"Ruan isomorphism: {report.triples_checked} triples, "
        f"{len(report.three_point_mismatches)} three-point and "
        f"{len(report.structure_constant_mismatches)} structure-constant mismatches"
    )
    return report


def associativity_report(
    ring: GlobalRingData,
    points: Sequence[RationalLike] = (0, Fraction(1, 3)),
) -> AssociativityReport:
    """Check (a*b)*c = a*(b*c) on basis triples with every ray specialised at each point.

    Failures are informational: associativity of the Ruan product is not
    guaranteed by the construction.
    """
    values = [to_rational(p) for p in points]
    constants = ruan_structure_constants(ring)
    labels = ring.labels
    report = AssociativityReport(points=[format_rational(p) for p in values])

    for point in values:
        at = {ray: point for ray in ring.multiplicities}
        table = {
            key: {lk: value.evaluate(at) for lk, value in row.items()}
            for key, row in constants.items()
        }

        def multiply(x: ClassVector, y: ClassVector) -> ClassVector:
            out: ClassVector = {}
            for lx, cx in x.items():
                for ly, cy in y.items():
                    for lk, c in table[(lx, ly)].items():
                        if c:
                            out[lk] = out.get(lk, Fraction(0)) + cx * cy * c
            return {k: v for k, v in out.items() if v}

        for la, lb, lc in product(labels, repeat=3):
            left = multiply(multiply(basis_vector(la), basis_vector(lb)), basis_vector(lc))
            right = multiply(basis_vector(la), multiply(basis_vector(lb), basis_vector(lc)))
            report.checked += 1
            if left != right:
                report.failures.append(
                    Mismatch(
                        inputs=[la, lb, lc, f"t={format_rational(point)}"],
                        x_value=str({k: format_rational(v) for k, v in sorted(left.items())}),
                        y_value=str({k: format_rational(v) for k, v in sorted(right.items())}),
                    )
                )

    if report.failures:
        logger.warning(f"Ruan product is not associative at {len(report.failures)} specialised triples")
    return report
