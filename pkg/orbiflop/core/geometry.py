"""
Numeric certification of the smoothing Q_r and its identification with W_r.

Points of R^4 x R^4 are ordered (x1, x2, x3, x4, y1, y2, y3, y4). Writing
f + i g = (x3 + i y3)^r, the smoothing is cut out by

    F1 = x1^2 + x2^2 + f^2 + x4^2 - 1 = 0
    F2 = x1 y1 + x2 y2 + f g + x4 y4 = 0

and mu_r acts by rotating the (x1, x2) and (y1, y2) planes by 2 pi a k / r
and the (x3, y3) plane by 2 pi k / r.

f, g and their derivatives are evaluated through complex powers: by the
Cauchy-Riemann equations f_x = Re(r z^{r-1}), g_x = Im(r z^{r-1}),
f_y = -g_x and g_y = f_x.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import sympy as sp

from ..models.schemas import CertificationReport, GeometryCheck, SampleConfig, ToleranceGap
from ..utils.errors import LeafMembershipError, SamplingBudgetError
from .local_model import validate_model

logger = logging.getLogger(__name__)

COORDINATES = ("x1", "x2", "x3", "x4", "y1", "y2", "y3", "y4")

# keeps |(x1, x2, x4)| away from 0 so the y-solve stays well conditioned
_RADIUS_MARGIN = 1e-6

LEAF_LAMBDAS = (0.5, 1.0, 2.0)


@dataclass(frozen=True)
class RealPoint:
    """A point of R^4 x R^4."""

    x1: float
    x2: float
    x3: float
    x4: float
    y1: float
    y2: float
    y3: float
    y4: float

    def __post_init__(self) -> None:
        if not np.all(np.isfinite(self.as_array())):
            raise ValueError(f"Non-finite coordinates: {self}")

    @classmethod
    def from_array(cls, values: Sequence[float]) -> "RealPoint":
        if len(values) != 8:
            raise ValueError(f"Expected 8 coordinates, got {len(values)}")
        return cls(*(float(v) for v in values))

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.x3, self.x4, self.y1, self.y2, self.y3, self.y4])

    @property
    def x_block(self) -> np.ndarray:
        """(x1, x2, x4)."""
        return np.array([self.x1, self.x2, self.x4])

    @property
    def y_block(self) -> np.ndarray:
        """(y1, y2, y4)."""
        return np.array([self.y1, self.y2, self.y4])


@dataclass(frozen=True)
class PolyPair:
    """f and g with f + i g = (x + i y)^r, as exact coefficient grids.

    ``f[(i, j)]`` is the coefficient of x^i y^j.
    """

    r: int
    f: Dict[Tuple[int, int], Fraction]
    g: Dict[Tuple[int, int], Fraction]

    def as_sympy(self) -> Tuple[sp.Expr, sp.Expr]:
        x, y = sp.symbols("x y", real=True)

        def build(grid: Dict[Tuple[int, int], Fraction]) -> sp.Expr:
            return sp.Add(*(sp.Rational(c.numerator, c.denominator) * x**i * y**j for (i, j), c in grid.items()))

        return build(self.f), build(self.g)

    def evaluate(self, x: float, y: float) -> Tuple[float, float]:
        fv = sum(float(c) * x**i * y**j for (i, j), c in self.f.items())
        gv = sum(float(c) * x**i * y**j for (i, j), c in self.g.items())
        return fv, gv

    def modulus_identity_holds(self) -> bool:
        """Exact check of f^2 + g^2 = (x^2 + y^2)^r."""
        x, y = sp.symbols("x y", real=True)
        f, g = self.as_sympy()
        return sp.expand(f**2 + g**2 - (x**2 + y**2) ** self.r) == 0


def fg_polys(r: int) -> PolyPair:
    """Real and imaginary parts of (x + i y)^r."""
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    x, y = sp.symbols("x y", real=True)
    re, im = sp.expand((x + sp.I * y) ** r).as_real_imag()

    def grid(expr: sp.Expr) -> Dict[Tuple[int, int], Fraction]:
        if expr == 0:
            return {}
        poly = sp.Poly(expr, x, y, domain=sp.QQ)
        return {monom: Fraction(int(c.p), int(c.q)) for monom, c in poly.terms()}

    return PolyPair(r, grid(re), grid(im))


def _fg(r: int, x3: float, y3: float) -> Tuple[float, float, float, float]:
    """f, g, df/dx3, dg/dx3."""
    z = complex(x3, y3)
    w = z**r
    dw = r * z ** (r - 1)
    return w.real, w.imag, dw.real, dw.imag


def F_eval(r: int, p: RealPoint) -> Tuple[float, float]:
    """Residuals (F1, F2) of the smoothing equations."""
    f, g, _, _ = _fg(r, p.x3, p.y3)
    F1 = p.x1**2 + p.x2**2 + f**2 + p.x4**2 - 1
    F2 = p.x1 * p.y1 + p.x2 * p.y2 + f * g + p.x4 * p.y4
    return F1, F2


def grad_F(r: int, p: RealPoint) -> Tuple[np.ndarray, np.ndarray]:
    """Analytic gradients of F1 and F2."""
    f, g, fx, gx = _fg(r, p.x3, p.y3)
    fy, gy = -gx, fx
    grad1 = np.array([2 * p.x1, 2 * p.x2, 2 * f * fx, 2 * p.x4, 0.0, 0.0, 2 * f * fy, 0.0])
    grad2 = np.array([p.y1, p.y2, fx * g + f * gx, p.y4, p.x1, p.x2, fy * g + f * gy, p.x4])
    return grad1, grad2


def fd_gradient(r: int, p: RealPoint, step: float = 1e-5) -> Tuple[np.ndarray, np.ndarray]:
    """Central finite-difference gradients of F1 and F2."""
    base = p.as_array()
    grad1, grad2 = np.zeros(8), np.zeros(8)
    for i in range(8):
        e = np.zeros(8)
        e[i] = step
        plus = F_eval(r, RealPoint.from_array(base + e))
        minus = F_eval(r, RealPoint.from_array(base - e))
        grad1[i] = (plus[0] - minus[0]) / (2 * step)
        grad2[i] = (plus[1] - minus[1]) / (2 * step)
    return grad1, grad2


def gradient_error(r: int, p: RealPoint, step: float = 1e-5) -> float:
    """Largest relative gap between analytic and finite-difference gradients."""
    worst = 0.0
    for analytic, numeric in zip(grad_F(r, p), fd_gradient(r, p, step)):
        scale = max(1.0, float(np.max(np.abs(analytic))))
        worst = max(worst, float(np.max(np.abs(analytic - numeric))) / scale)
    return worst


def symplectic_pairing(r: int, p: RealPoint) -> Tuple[float, float]:
    """-omega_0(grad F1, grad F2) computed directly, and the displayed closed form.

    The direct sum equals 2x1^2 + 2x2^2 + 2f^2(f_x^2 + g_x^2) + 2x4^2; the
    closed form carries 2f in place of 2f^2 and is returned for comparison.
    """
    grad1, grad2 = grad_F(r, p)
    numeric = float(np.dot(grad1[:4], grad2[4:]) - np.dot(grad2[:4], grad1[4:]))
    f, _, fx, gx = _fg(r, p.x3, p.y3)
    closed_form = 2 * p.x1**2 + 2 * p.x2**2 + 2 * f * (fx**2 + gx**2) + 2 * p.x4**2
    return numeric, closed_form


def jacobian(r: int, p: RealPoint) -> np.ndarray:
    return np.vstack(grad_F(r, p))


def jacobian_rank(r: int, p: RealPoint, tol: float = 1e-8) -> int:
    """Numerical rank of the 2x8 Jacobian (singular values above tol)."""
    return int(np.linalg.matrix_rank(jacobian(r, p), tol=tol))


def _rotate(c: float, s: float, u: float, v: float) -> Tuple[float, float]:
    return c * u - s * v, s * u + c * v


def mu_action(r: int, a: int, power: int, p: RealPoint) -> RealPoint:
    """Action of xi^power, xi = exp(2 pi i / r), with weights (a, -a, 1, 0)."""
    theta = 2 * math.pi * a * power / r
    phi = 2 * math.pi * power / r
    c, s = math.cos(theta), math.sin(theta)
    x1, x2 = _rotate(c, s, p.x1, p.x2)
    y1, y2 = _rotate(c, s, p.y1, p.y2)
    x3, y3 = _rotate(math.cos(phi), math.sin(phi), p.x3, p.y3)
    return RealPoint(x1, x2, x3, p.x4, y1, y2, y3, p.y4)


def invariance_error(r: int, a: int, power: int, p: RealPoint) -> float:
    """|F(xi^power p) - F(p)| relative to the size of the terms of F.

    Rounding in z^r is proportional to |z|^r, so f g is measured against
    f^2 + g^2 rather than its own, possibly cancelling, value.
    """
    before, after = F_eval(r, p), F_eval(r, mu_action(r, a, power, p))
    f, g, _, _ = _fg(r, p.x3, p.y3)
    x, y = p.x_block, p.y_block
    scale = max(1.0, float(x @ x) + float(np.abs(x) @ np.abs(y)) + f**2 + g**2)
    return max(abs(after[0] - before[0]), abs(after[1] - before[1])) / scale


def monomial_invariance(r: int, a: int) -> bool:
    """Exact check that x y - z^{2r} + t^2 is invariant under mu_r(a, -a, 1, 0)."""
    validate_model(r, a)
    x, y, z, t = sp.symbols("x y z t")
    poly = sp.Poly(x * y - z ** (2 * r) + t**2, x, y, z, t)
    weights = (a, -a, 1, 0)
    return all(sum(e * w for e, w in zip(monom, weights)) % r == 0 for monom in poly.monoms())


# ----------------------------------------------------------------------
# Leaves, the identification Phi_r and the projection pi
# ----------------------------------------------------------------------


def _blocks(r: int, p: RealPoint) -> Tuple[np.ndarray, np.ndarray]:
    f, g, _, _ = _fg(r, p.x3, p.y3)
    return np.array([p.x1, p.x2, f, p.x4]), np.array([p.y1, p.y2, g, p.y4])


def w_leaf_residuals(r: int, lam: float, p: RealPoint) -> Tuple[float, float, float]:
    """Residuals of |A|^2 = lam, |B|^2 = lam, A.B = 0 with A = (x1, x2, f, x4), B = (y1, y2, g, y4)."""
    a_vec, b_vec = _blocks(r, p)
    return float(a_vec @ a_vec - lam), float(b_vec @ b_vec - lam), float(a_vec @ b_vec)


def q_leaf_residuals(r: int, lam: float, p: RealPoint) -> Tuple[float, float, float]:
    """Residuals of |A|^2 = 1, |B|^2 = lam^2, A.B = 0."""
    a_vec, b_vec = _blocks(r, p)
    return float(a_vec @ a_vec - 1), float(b_vec @ b_vec - lam**2), float(a_vec @ b_vec)


def phi_r_map(r: int, lam: float, p: RealPoint, tol: float = 1e-9) -> RealPoint:
    """Identify a point of the leaf W_{r,lam} with a point of Q_{r,lam}.

    x-block coordinates scale by lam^{-1/2}, y-block coordinates by lam^{1/2},
    and (u + i v) is the principal r-th root of lam^{-1/2} f + i lam^{1/2} g.
    At lam = 1 only (x3, y3) can change, within its mu_r orbit.

    Raises:
        LeafMembershipError: If p is not on W_{r,lam} within tol.
    """
    if lam <= 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    residuals = w_leaf_residuals(r, lam, p)
    if max(abs(v) for v in residuals) >= tol:
        raise LeafMembershipError(f"Point is off W_{{{r},{lam}}}: residuals {residuals}")
    f, g, _, _ = _fg(r, p.x3, p.y3)
    sx, sy = lam**-0.5, lam**0.5
    root = complex(sx * f, sy * g) ** (1.0 / r) if r > 1 else complex(sx * f, sy * g)
    return RealPoint(sx * p.x1, sx * p.x2, root.real, sx * p.x4, sy * p.y1, sy * p.y2, root.imag, sy * p.y4)


def pi_projection(r: int, p: RealPoint) -> RealPoint:
    """(x3, y3) -> (f, g); the other coordinates are unchanged."""
    f, g, _, _ = _fg(r, p.x3, p.y3)
    return RealPoint(p.x1, p.x2, f, p.x4, p.y1, p.y2, g, p.y4)


def projection_commutator(r: int, lam: float, p: RealPoint, tol: float = 1e-9) -> float:
    """max |pi(Phi_r(p)) - Phi_1(pi(p))| for p on W_{r,lam}."""
    lhs = pi_projection(r, phi_r_map(r, lam, p, tol)).as_array()
    rhs = phi_r_map(1, lam, pi_projection(r, p), tol).as_array()
    return float(np.max(np.abs(lhs - rhs)))


def projection_equivariance_error(r: int, a: int, power: int, p: RealPoint) -> float:
    """Gap between pi(xi.p) and pi(p) with only its (x1, x2), (y1, y2) planes rotated."""
    moved = pi_projection(r, mu_action(r, a, power, p))
    base = pi_projection(r, p)
    theta = 2 * math.pi * a * power / r
    c, s = math.cos(theta), math.sin(theta)
    x1, x2 = _rotate(c, s, base.x1, base.x2)
    y1, y2 = _rotate(c, s, base.y1, base.y2)
    expected = RealPoint(x1, x2, base.x3, base.x4, y1, y2, base.y3, base.y4)
    return float(np.max(np.abs(moved.as_array() - expected.as_array())))


def exceptional_set_member(r: int, p: RealPoint, tol: float = 1e-9) -> bool:
    """Membership in L_r = {p in Q_r : y1 = y2 = g = y4 = 0}."""
    F1, F2 = F_eval(r, p)
    _, g, _, _ = _fg(r, p.x3, p.y3)
    return max(abs(F1), abs(F2), abs(p.y1), abs(p.y2), abs(g), abs(p.y4)) < tol


# ----------------------------------------------------------------------
# Sampling
# ----------------------------------------------------------------------


def _rngs(cfg: SampleConfig, stream: int = 0) -> List[np.random.Generator]:
    root = np.random.SeedSequence([cfg.seed, stream])
    return [np.random.default_rng(child) for child in root.spawn(cfg.count)]


def _unit(rng: np.random.Generator, dim: int = 3) -> np.ndarray:
    v = rng.normal(size=dim)
    return v / np.linalg.norm(v)


def _point(x_block: np.ndarray, y_block: np.ndarray, x3: float, y3: float) -> RealPoint:
    return RealPoint(x_block[0], x_block[1], x3, x_block[2], y_block[0], y_block[1], y3, y_block[2])


def _sample_Qr_point(r: int, rng: np.random.Generator, cfg: SampleConfig) -> RealPoint:
    for _ in range(cfg.rejection_budget):
        x3, y3 = rng.uniform(-cfg.sample_box, cfg.sample_box, size=2)
        f, g, _, _ = _fg(r, x3, y3)
        if f * f < 1 - _RADIUS_MARGIN:
            break
    else:
        raise SamplingBudgetError(f"No (x3, y3) with f^2 < 1 after {cfg.rejection_budget} draws (r={r})")
    x_block = math.sqrt(1 - f * f) * _unit(rng)
    w = rng.normal(size=3)
    y_block = w - ((x_block @ w + f * g) / (x_block @ x_block)) * x_block
    return _point(x_block, y_block, float(x3), float(y3))


def sample_Qr(r: int, cfg: SampleConfig) -> List[RealPoint]:
    """Seeded points of Q_r; sample i depends only on (seed, i)."""
    return [_sample_Qr_point(r, rng, cfg) for rng in _rngs(cfg, stream=0)]


def sample_degenerate_stratum(r: int, cfg: SampleConfig) -> List[RealPoint]:
    """Points of Q_r with x1 = x2 = x4 = 0, where f = +-1 and g = 0."""
    points = []
    for rng in _rngs(cfg, stream=1):
        k = int(rng.integers(0, 2 * r))
        angle = math.pi * k / r
        y_block = rng.normal(size=3)
        points.append(_point(np.zeros(3), y_block, math.cos(angle), math.sin(angle)))
    return points


def _sample_leaf_point(r: int, lam: float, rng: np.random.Generator, cfg: SampleConfig) -> RealPoint:
    for _ in range(cfg.rejection_budget):
        x3, y3 = rng.uniform(-cfg.sample_box, cfg.sample_box, size=2)
        f, g, _, _ = _fg(r, x3, y3)
        if f * f >= lam * (1 - _RADIUS_MARGIN):
            continue
        x_block = math.sqrt(lam - f * f) * _unit(rng)
        # closest point of the plane x.y = -f g to the origin
        y0 = -(f * g / (x_block @ x_block)) * x_block
        rho2 = lam - g * g - y0 @ y0
        if rho2 < 0:
            continue
        e = rng.normal(size=3)
        e -= (e @ x_block) / (x_block @ x_block) * x_block
        e /= np.linalg.norm(e)
        return _point(x_block, y0 + math.sqrt(rho2) * e, float(x3), float(y3))
    raise SamplingBudgetError(f"No point of W_{{{r},{lam}}} after {cfg.rejection_budget} draws")


def sample_W_leaf(r: int, lam: float, cfg: SampleConfig) -> List[RealPoint]:
    """Seeded points of the leaf W_{r,lam}."""
    stream = 2 + int(round(lam * 1000))
    return [_sample_leaf_point(r, lam, rng, cfg) for rng in _rngs(cfg, stream=stream)]


def sample_exceptional_set(r: int, cfg: SampleConfig) -> List[RealPoint]:
    """Seeded points of L_r: z3^r real with |z3^r| < 1, y1 = y2 = y4 = 0."""
    points = []
    for rng in _rngs(cfg, stream=3):
        k = int(rng.integers(0, 2 * r))
        rho = rng.uniform(0, 1 - _RADIUS_MARGIN) ** (1.0 / r)
        angle = math.pi * k / r
        f = (rho**r) * math.cos(math.pi * k)
        x_block = math.sqrt(1 - f * f) * _unit(rng)
        points.append(_point(x_block, np.zeros(3), rho * math.cos(angle), rho * math.sin(angle)))
    return points


def dump_samples(points: Iterable[RealPoint], path: Path) -> None:
    """Write points as CSV with a coordinate header."""
    data = np.array([p.as_array() for p in points])
    np.savetxt(path, data, delimiter=",", header=",".join(COORDINATES), comments="", fmt="%.17g")


# ----------------------------------------------------------------------
# Certification
# ----------------------------------------------------------------------


def _aggregate(
    name: str,
    r: int,
    values: Sequence[float],
    tolerance: float,
    ok: Callable[[float], bool],
    worst: Callable[[Sequence[float]], float] = max,
) -> GeometryCheck:
    passes = sum(1 for v in values if ok(v))
    return GeometryCheck(
        name=name,
        r=r,
        samples=len(values),
        passes=passes,
        worst=float(worst(values)) if values else 0.0,
        tolerance=tolerance,
        passed=passes == len(values),
    )


def certify(r: int, cfg: SampleConfig, a: Optional[int] = None) -> CertificationReport:
    """Run every numeric check for one r with seeded samples.

    Args:
        r: Group order.
        cfg: Seed, count and tolerances.
        a: Action weight; defaults to 1 (0 when r = 1).

    Returns:
        CertificationReport with one GeometryCheck per property.
    """
    weight = a if a is not None else (1 if r > 1 else 0)
    validate_model(r, weight)
    logger.info(f"Certifying r={r} a={weight} with seed={cfg.seed} count={cfg.count}")

    points = sample_Qr(r, cfg)
    residuals = [max(abs(v) for v in F_eval(r, p)) for p in points]
    ranks = [jacobian_rank(r, p, cfg.rank_tol) for p in points]
    pairings = [symplectic_pairing(r, p) for p in points]
    gradients = [gradient_error(r, p, cfg.fd_step) for p in points]
    invariance = [
        max(invariance_error(r, weight, power, p) for power in range(1, r + 1))
        for p in points
    ]
    projected = [max(abs(v) for v in F_eval(1, pi_projection(r, p))) for p in points]
    equivariance = [projection_equivariance_error(r, weight, 1, p) for p in points]

    degenerate = sample_degenerate_stratum(r, cfg)
    degenerate_pairing = [abs(symplectic_pairing(r, p)[0]) for p in degenerate]
    degenerate_rank = [jacobian_rank(r, p, cfg.rank_tol) for p in degenerate]

    leaf_residuals: List[float] = []
    commutators: List[float] = []
    for lam in LEAF_LAMBDAS:
        for p in sample_W_leaf(r, lam, cfg):
            image = phi_r_map(r, lam, p, cfg.tol_eq)
            leaf_residuals.append(max(abs(v) for v in q_leaf_residuals(r, lam, image)))
            commutators.append(projection_commutator(r, lam, p, cfg.tol_eq))

    exceptional = sample_exceptional_set(r, cfg)
    exceptional_images = [0.0 if exceptional_set_member(1, pi_projection(r, p), cfg.tol_eq) else 1.0 for p in exceptional]

    checks = [
        _aggregate("equation_residual", r, residuals, cfg.tol_eq, lambda v: v < cfg.tol_eq),
        _aggregate("jacobian_rank", r, [float(k) for k in ranks], cfg.rank_tol, lambda v: v == 2, min),
        _aggregate(
            "symplectic_pairing", r, [abs(n) for n, _ in pairings], cfg.pairing_floor,
            lambda v: v > cfg.pairing_floor, min,
        ),
        _aggregate("gradient_fd", r, gradients, cfg.tol_grad, lambda v: v < cfg.tol_grad),
        _aggregate("mu_invariance", r, invariance, cfg.invariance_tol, lambda v: v < cfg.invariance_tol),
        _aggregate("projection_to_Q1", r, projected, cfg.tol_eq, lambda v: v < cfg.tol_eq),
        _aggregate("projection_equivariance", r, equivariance, cfg.tol_eq, lambda v: v < cfg.tol_eq),
        _aggregate(
            "degenerate_pairing", r, degenerate_pairing, cfg.pairing_floor,
            lambda v: v > cfg.pairing_floor, min,
        ),
        _aggregate("degenerate_rank", r, [float(k) for k in degenerate_rank], cfg.rank_tol, lambda v: v == 2, min),
        _aggregate("phi_leaf", r, leaf_residuals, cfg.tol_eq, lambda v: v < cfg.tol_eq),
        _aggregate("phi_projection_commutes", r, commutators, cfg.tol_eq, lambda v: v < cfg.tol_eq),
        _aggregate("exceptional_set_projection", r, exceptional_images, cfg.tol_eq, lambda v: v == 0.0),
    ]
    gap = max((abs(n - c) for n, c in pairings), default=0.0)
    if gap > cfg.tol_eq:
        logger.warning(f"Closed-form pairing differs from the direct sum by up to {gap:.3e} (r={r})")

    report = CertificationReport(
        r=r,
        a=weight,
        seed=cfg.seed,
        count=cfg.count,
        checks=checks,
        closed_form_max_gap=ToleranceGap(value=gap, tol_eq=cfg.tol_eq),
        monomial_invariant=monomial_invariance(r, weight),
    )
    for check in checks:
        if not check.passed:
            logger.warning(f"{check.name} failed for r={r}: {check.passes}/{check.samples}, worst {check.worst:.3e}")
    return report
