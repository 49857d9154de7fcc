"""Pydantic schemas for orbiflop inputs and reports."""

import re
from functools import cached_property
from math import gcd
from typing import Any, Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, Field, field_validator, model_validator

from ..algebra.matrices import RationalMatrix, rank
from ..algebra.rationals import to_rational
from .enums import CheckStatus

RationalValue = Union[int, str]

TWISTED_LABEL = re.compile(r"^([pq])_(\w+?)_(\d+)$")


def _check_rational(value: RationalValue) -> RationalValue:
    to_rational(value)
    return value


class SingularityParams(BaseModel):
    """Parameters (r, a) of one singular point."""

    r: int = Field(..., ge=1, description="Order of the cyclic group")
    a: int = Field(..., ge=0, description="Weight of the action")

    @model_validator(mode="after")
    def check_weight(self) -> "SingularityParams":
        if self.r == 1 and self.a != 0:
            raise ValueError(f"a must be 0 when r = 1, got {self.a}")
        if self.r > 1 and not 1 <= self.a < self.r:
            raise ValueError(f"a must satisfy 1 <= a < {self.r}, got {self.a}")
        if gcd(self.a, self.r) != 1:
            raise ValueError(f"gcd(a, r) must be 1, got gcd({self.a}, {self.r})")
        return self


class ConifoldConfig(BaseModel):
    """Global symplectic orbi-conifold data for the resolution solver.

    Column i of ``theta`` holds the coordinates of the Thom class of the i-th
    vanishing sphere in a fixed basis of H^3(X, R).
    """

    kappa: int = Field(..., ge=1, description="Number of singular points")
    singularities: List[SingularityParams] = Field(..., description="(r_i, a_i) per singular point")
    theta: List[List[RationalValue]] = Field(
        default_factory=list,
        description="Rows of the Thom-class coordinate matrix (kappa columns)"
    )

    @field_validator("theta")
    @classmethod
    def check_entries(cls, rows: List[List[RationalValue]]) -> List[List[RationalValue]]:
        for row in rows:
            for value in row:
                _check_rational(value)
        return rows

    @model_validator(mode="after")
    def check_shape(self) -> "ConifoldConfig":
        if len(self.singularities) != self.kappa:
            raise ValueError(f"expected {self.kappa} singularities, got {len(self.singularities)}")
        for i, row in enumerate(self.theta):
            if len(row) != self.kappa:
                raise ValueError(f"theta row {i} has {len(row)} columns, expected kappa={self.kappa}")
        return self

    def theta_matrix(self) -> RationalMatrix:
        return RationalMatrix.from_rows(self.theta, cols=self.kappa)


class BasisEntry(BaseModel):
    """One basis class of the global Chen-Ruan cohomology."""

    label: str = Field(..., min_length=1)
    degree: RationalValue = Field(..., description="Rational degree")
    support: Optional[List[str]] = Field(
        default=None,
        description="Rays whose neighbourhood the class meets; None means all rays"
    )

    @field_validator("degree")
    @classmethod
    def check_degree(cls, value: RationalValue) -> RationalValue:
        return _check_rational(value)


class ClassicalEntry(BaseModel):
    """A nonzero classical three-point constant."""

    inputs: Tuple[str, str, str]
    value: RationalValue

    @field_validator("value")
    @classmethod
    def check_value(cls, value: RationalValue) -> RationalValue:
        return _check_rational(value)


class RayEntry(BaseModel):
    """An extremal ray and the multiplicity r_i of its orbifold points."""

    id: str = Field(..., min_length=1)
    multiplicity: int = Field(..., ge=1)


class GlobalRingData(BaseModel):
    """Classical Chen-Ruan data of a compact orbifold plus its extremal rays.

    Missing classical constants are zero. Twisted labels have the form
    ``p_<ray>_<k>`` or ``q_<ray>_<k>`` and refer to the orbifold points on the
    curve of ``<ray>``.
    """

    basis: List[BasisEntry]
    pairing: List[List[RationalValue]]
    classical_constants: List[ClassicalEntry] = Field(default_factory=list)
    rays: List[RayEntry] = Field(default_factory=list)
    ray_pairings: Dict[str, Dict[str, RationalValue]] = Field(
        default_factory=dict,
        description="label -> {ray: b(Gamma_ray)}, degree-2 labels only"
    )

    model_config = {"ignored_types": (cached_property,)}

    @model_validator(mode="after")
    def check_consistency(self) -> "GlobalRingData":
        labels = [b.label for b in self.basis]
        if len(set(labels)) != len(labels):
            raise ValueError("basis labels must be unique")
        n = len(labels)
        known = set(labels)
        ray_ids = {ray.id: ray.multiplicity for ray in self.rays}
        if len(ray_ids) != len(self.rays):
            raise ValueError("ray ids must be unique")

        if len(self.pairing) != n or any(len(row) != n for row in self.pairing):
            raise ValueError(f"pairing must be a {n}x{n} matrix")
        for i in range(n):
            for j in range(n):
                if to_rational(self.pairing[i][j]) != to_rational(self.pairing[j][i]):
                    raise ValueError(f"pairing is not symmetric at ({labels[i]}, {labels[j]})")

        seen: Dict[Tuple[str, ...], Any] = {}
        for entry in self.classical_constants:
            for label in entry.inputs:
                if label not in known:
                    raise ValueError(f"classical constant refers to unknown label {label!r}")
            key = tuple(sorted(entry.inputs))
            value = to_rational(entry.value)
            if key in seen and seen[key] != value:
                raise ValueError(f"classical constants are not symmetric at {key}")
            seen[key] = value

        degrees = {b.label: to_rational(b.degree) for b in self.basis}
        for label, values in self.ray_pairings.items():
            if label not in known:
                raise ValueError(f"ray pairing for unknown label {label!r}")
            if degrees[label] != 2:
                raise ValueError(f"ray pairing given for {label!r} of degree {degrees[label]}, expected 2")
            for ray, value in values.items():
                if ray not in ray_ids:
                    raise ValueError(f"ray pairing refers to unknown ray {ray!r}")
                _check_rational(value)

        for b in self.basis:
            for ray in b.support or []:
                if ray not in ray_ids:
                    raise ValueError(f"support of {b.label!r} refers to unknown ray {ray!r}")
            match = TWISTED_LABEL.match(b.label)
            if not match:
                continue
            point, ray, k = match.group(1), match.group(2), int(match.group(3))
            if ray not in ray_ids:
                raise ValueError(f"twisted label {b.label!r} refers to unknown ray {ray!r}")
            r = ray_ids[ray]
            if not 1 <= k < r:
                raise ValueError(f"twisted label {b.label!r} needs 1 <= k < {r}")
            partner = f"{point}_{ray}_{r - k}"
            if partner not in known:
                raise ValueError(f"twisted label {b.label!r} has no complementary sector {partner!r}")

        if rank(self.pairing_matrix()) < n:
            raise ValueError("pairing is singular")
        return self

    @cached_property
    def labels(self) -> List[str]:
        return [b.label for b in self.basis]

    @cached_property
    def degrees(self) -> Dict[str, Any]:
        return {b.label: to_rational(b.degree) for b in self.basis}

    @cached_property
    def supports(self) -> Dict[str, Optional[frozenset]]:
        return {b.label: (None if b.support is None else frozenset(b.support)) for b in self.basis}

    @cached_property
    def multiplicities(self) -> Dict[str, int]:
        return {ray.id: ray.multiplicity for ray in self.rays}

    @cached_property
    def constant_table(self) -> Dict[Tuple[str, ...], Any]:
        return {tuple(sorted(e.inputs)): to_rational(e.value) for e in self.classical_constants}

    def pairing_matrix(self) -> RationalMatrix:
        return RationalMatrix.from_rows(self.pairing, cols=len(self.basis))

    def classical(self, l1: str, l2: str, l3: str) -> Any:
        return self.constant_table.get(tuple(sorted((l1, l2, l3))), to_rational(0))

    def ray_value(self, label: str, ray: str) -> Any:
        return to_rational(self.ray_pairings.get(label, {}).get(ray, 0))


class FlopCorrespondence(BaseModel):
    """Identification of Y-side data with X-side data across a flop.

    ``class_map`` sends each Y basis label to an X basis label. ``ray_map``
    sends each Y ray to the X ray it is flopped from; the curve class changes
    sign, so the Novikov variable is inverted.
    """

    class_map: Dict[str, str]
    ray_map: Dict[str, str] = Field(default_factory=dict)

    @model_validator(mode="after")
    def check_bijective(self) -> "FlopCorrespondence":
        if len(set(self.class_map.values())) != len(self.class_map):
            raise ValueError("class_map is not injective")
        if len(set(self.ray_map.values())) != len(self.ray_map):
            raise ValueError("ray_map is not injective")
        return self

    @classmethod
    def identity(cls, labels: List[str], rays: Optional[List[str]] = None) -> "FlopCorrespondence":
        return cls(
            class_map={label: label for label in labels},
            ray_map={ray: ray for ray in rays or []},
        )

    def inverted(self) -> "FlopCorrespondence":
        return FlopCorrespondence(
            class_map={x: y for y, x in self.class_map.items()},
            ray_map={x: y for y, x in self.ray_map.items()},
        )


class SampleConfig(BaseModel):
    """Seed, sample count and tolerances for a geometry certification run."""

    seed: int = Field(default=0, ge=0, description="Root seed for all sampling")
    count: int = Field(default=1000, ge=1, description="Samples per check")
    tol_eq: float = Field(default=1e-9, gt=0)
    tol_grad: float = Field(default=1e-6, gt=0)
    rank_tol: float = Field(default=1e-8, gt=0)
    pairing_floor: float = Field(default=1e-8, gt=0)
    invariance_tol: float = Field(default=1e-12, gt=0)
    fd_step: float = Field(default=1e-5, gt=0)
    sample_box: float = Field(default=1.5, gt=0)
    rejection_budget: int = Field(default=10000, ge=1)

    @classmethod
    def from_settings(cls, settings: Any, **overrides: Any) -> "SampleConfig":
        """Build from Settings defaults, letting non-None overrides win."""
        values = {
            "seed": settings.default_seed,
            "count": settings.default_count,
            "tol_eq": settings.tol_eq,
            "tol_grad": settings.tol_grad,
            "rank_tol": settings.rank_tol,
            "pairing_floor": settings.pairing_floor,
            "invariance_tol": settings.invariance_tol,
            "fd_step": settings.fd_step,
            "sample_box": settings.sample_box,
            "rejection_budget": settings.rejection_budget,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


# ----------------------------------------------------------------------
# Reports
# ----------------------------------------------------------------------


class TripleCheck(BaseModel):
    """Flop identity result for one triple of classes."""

    inputs: List[str]
    classical_difference: str
    quantum_difference: str
    total: str
    passed: bool


class FlopCheckReport(BaseModel):
    """Result of checking Psi^{W^s}(phi b) = Psi^{W^sf}(b) over triples."""

    r: int
    a: int
    triples: List[TripleCheck] = Field(default_factory=list)
    passed: bool = True

    @property
    def failures(self) -> List[TripleCheck]:
        return [t for t in self.triples if not t.passed]


class Mismatch(BaseModel):
    """A triple (or structure constant index) where the two rings disagree."""

    inputs: List[str]
    x_value: str
    y_value: str


class IsomorphismReport(BaseModel):
    """Outcome of comparing two Ruan rings through a flop correspondence."""

    pairing_compatible: bool
    triples_checked: int = 0
    three_point_mismatches: List[Mismatch] = Field(default_factory=list)
    structure_constant_mismatches: List[Mismatch] = Field(default_factory=list)
    passed: bool = False


class AssociativityReport(BaseModel):
    """Associativity of the Ruan product at specialised ray values (informational)."""

    points: List[str]
    checked: int = 0
    failures: List[Mismatch] = Field(default_factory=list)

    @property
    def associative(self) -> bool:
        return not self.failures


class PatternVerdict(BaseModel):
    """A feasible sign pattern and its kernel certificate."""

    signs: List[int]
    choice: List[str]
    certificate: List[str]


class ResolutionReport(BaseModel):
    """Symplectic small resolutions of a global orbi-conifold."""

    kappa: int
    kernel_dimension: int
    feasible: List[PatternVerdict] = Field(default_factory=list)
    convention: str = "lambda_i < 0 -> s, lambda_i > 0 -> sf"


class GeometryCheck(BaseModel):
    """Aggregate of one numeric check over a sample set."""

    name: str
    r: int
    samples: int
    passes: int
    worst: float = Field(..., description="Worst observed value of the checked quantity")
    tolerance: float
    passed: bool


class ToleranceGap(BaseModel):
    """A measured discrepancy tagged with the tolerance it was measured against."""

    value: float = Field(..., description="Largest observed discrepancy")
    tol_eq: float = Field(..., description="Equality tolerance in force for the run")

    @property
    def within_tolerance(self) -> bool:
        return self.value <= self.tol_eq


class CertificationReport(BaseModel):
    """All numeric checks for one r, with provenance."""

    r: int
    a: int
    seed: int
    count: int
    checks: List[GeometryCheck] = Field(default_factory=list)
    closed_form_max_gap: ToleranceGap = Field(
        ..., description="Largest |direct pairing - displayed closed form| seen, against tol_eq"
    )
    monomial_invariant: bool = True

    @property
    def passed(self) -> bool:
        return self.monomial_invariant and all(c.passed for c in self.checks)


class RunReport(BaseModel):
    """Envelope printed by every CLI command."""

    command: List[str] = Field(..., description="Echo of the invocation")
    inputs_digest: str = Field(..., description="sha256 of the canonical inputs")
    status: CheckStatus
    results: Dict[str, Any] = Field(default_factory=dict)
    provenance: Dict[str, Any] = Field(default_factory=dict)


class RuanVerifyConfig(BaseModel):
    """Input of the ruan-verify command: explicit ring pair or local charts to glue."""

    ring_x: Optional[GlobalRingData] = None
    ring_y: Optional[GlobalRingData] = None
    correspondence: Optional[FlopCorrespondence] = None
    charts: Optional[List[SingularityParams]] = None
    seed: int = Field(default=0, ge=0, description="Seed for the random cubic form of glued charts")

    @model_validator(mode="after")
    def check_source(self) -> "RuanVerifyConfig":
        explicit = (self.ring_x, self.ring_y, self.correspondence)
        if self.charts is not None:
            if any(item is not None for item in explicit):
                raise ValueError("give either charts or ring_x/ring_y/correspondence, not both")
            if not self.charts:
                raise ValueError("charts must not be empty")
        elif any(item is None for item in explicit):
            raise ValueError("ring_x, ring_y and correspondence are all required without charts")
        return self
