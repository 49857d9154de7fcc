"""Synthetic global ring data glued from local-model charts.

Each chart u contributes a ray t_u of multiplicity r_u, a degree-2 class H_u
with H_u(Gamma_u) = +1 on X (the W^s side) and -1 on Y, its dual D_u, and the
twisted sectors of both orbifold points. The classical cubic form of X is
drawn at random; Y differs from it exactly on (H_u, H_u, H_u) by r_u^3.
"""

import logging
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Dict, List, Sequence, Tuple

import numpy as np

from ..models.enums import Side
from ..models.schemas import FlopCorrespondence, GlobalRingData
from .local_model import validate_model

logger = logging.getLogger(__name__)

UNIT = "1"
VOLUME = "vol"


def _ray(u: int) -> str:
    return f"t{u}"


def _chart_labels(u: int, r: int) -> Dict[str, Fraction]:
    labels = {f"H_{u}": Fraction(2), f"D_{u}": Fraction(4)}
    for point in ("p", "q"):
        for k in range(1, r):
            labels[f"{point}_{_ray(u)}_{k}"] = 1 + Fraction(k, r)
    return labels


def _ring(
    charts: Sequence[Tuple[int, int]],
    cubic: Dict[Tuple[int, int, int], int],
    side: Side,
) -> GlobalRingData:
    degrees: Dict[str, Fraction] = {UNIT: Fraction(0), VOLUME: Fraction(6)}
    supports: Dict[str, List[str]] = {}
    for u, (r, _) in enumerate(charts, start=1):
        for label, degree in _chart_labels(u, r).items():
            degrees[label] = degree
            if not label.startswith("D_"):
                supports[label] = [_ray(u)]
    labels = list(degrees)
    index = {label: i for i, label in enumerate(labels)}

    pairs: Dict[Tuple[str, str], Fraction] = {(UNIT, VOLUME): Fraction(1)}
    for u, (r, _) in enumerate(charts, start=1):
        pairs[(f"H_{u}", f"D_{u}")] = Fraction(1)
        for point in ("p", "q"):
            for k in range(1, r):
                pairs[(f"{point}_{_ray(u)}_{k}", f"{point}_{_ray(u)}_{r - k}")] = Fraction(1, r)

    pairing = [["0"] * len(labels) for _ in labels]
    constants = []
    for (x, y), value in pairs.items():
        pairing[index[x]][index[y]] = str(value)
        pairing[index[y]][index[x]] = str(value)
    seen = set()
    for (x, y), value in pairs.items():
        key = tuple(sorted((UNIT, x, y)))
        if key not in seen:
            seen.add(key)
            constants.append({"inputs": [UNIT, x, y], "value": str(value)})

    for (u, v, w), value in cubic.items():
        if side is Side.SF and u == v == w:
            value -= charts[u - 1][0] ** 3
        if value:
            constants.append({"inputs": [f"H_{u}", f"H_{v}", f"H_{w}"], "value": str(value)})

    sign = 1 if side is Side.S else -1
    return GlobalRingData(
        basis=[
            {"label": label, "degree": str(degree), "support": supports.get(label)}
            for label, degree in degrees.items()
        ],
        pairing=pairing,
        classical_constants=constants,
        rays=[{"id": _ray(u), "multiplicity": r} for u, (r, _) in enumerate(charts, start=1)],
        ray_pairings={f"H_{u}": {_ray(u): sign} for u in range(1, len(charts) + 1)},
    )


def assemble_chart_rings(
    charts: Sequence[Tuple[int, int]],
    seed: int = 0,
    cubic_bound: int = 3,
) -> Tuple[GlobalRingData, GlobalRingData, FlopCorrespondence]:
    """Build a flop pair of global rings from local charts.

    Args:
        charts: (r_u, a_u) per singular point.
        seed: Seed for the random classical cubic form of X.
        cubic_bound: Cubic coefficients are drawn from [-bound, bound].

    Returns:
        (ring_x, ring_y, correspondence) with the identity correspondence.
    """
    for r, a in charts:
        validate_model(r, a)
    rng = np.random.default_rng(seed)
    kappa = len(charts)
    cubic = {
        triple: int(rng.integers(-cubic_bound, cubic_bound + 1))
        for triple in combinations_with_replacement(range(1, kappa + 1), 3)
    }
    ring_x = _ring(charts, cubic, Side.S)
    ring_y = _ring(charts, cubic, Side.SF)
    corr = FlopCorrespondence.identity(ring_y.labels, [_ray(u) for u in range(1, kappa + 1)])
    logger.info(f"Assembled chart rings for {kappa} charts with {len(ring_x.labels)} basis classes")
    return ring_x, ring_y, corr
