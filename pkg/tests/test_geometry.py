"""
Tests for the numeric side: the smoothing equations, their gradients, the
mu_r action, the leaf identification and seeded certification runs.
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from orbiflop.core.geometry import (
    F_eval,
    RealPoint,
    certify,
    dump_samples,
    exceptional_set_member,
    fg_polys,
    gradient_error,
    grad_F,
    invariance_error,
    jacobian_rank,
    monomial_invariance,
    mu_action,
    phi_r_map,
    pi_projection,
    projection_commutator,
    projection_equivariance_error,
    q_leaf_residuals,
    sample_degenerate_stratum,
    sample_exceptional_set,
    sample_Qr,
    sample_W_leaf,
    symplectic_pairing,
    w_leaf_residuals,
)
from orbiflop.core.local_model import valid_weights
from orbiflop.models.schemas import SampleConfig
from orbiflop.utils.errors import LeafMembershipError, SamplingBudgetError


def _p(*coords: float) -> RealPoint:
    return RealPoint.from_array(coords)


ORIGIN = _p(0, 0, 0, 0, 0, 0, 0, 0)
E1 = _p(1, 0, 0, 0, 0, 0, 0, 0)


class TestRealPoint:
    """Test the coordinate container."""

    def test_blocks(self):
        p = _p(1, 2, 3, 4, 5, 6, 7, 8)
        assert p.x_block.tolist() == [1, 2, 4]
        assert p.y_block.tolist() == [5, 6, 8]
        assert p.as_array().tolist() == [1, 2, 3, 4, 5, 6, 7, 8]

    def test_wrong_length(self):
        with pytest.raises(ValueError):
            RealPoint.from_array([0.0] * 7)

    def test_non_finite(self):
        with pytest.raises(ValueError):
            _p(float("nan"), 0, 0, 0, 0, 0, 0, 0)


class TestPolynomials:
    """Test f + i g = (x + i y)^r."""

    def test_r1(self):
        pair = fg_polys(1)
        assert pair.f == {(1, 0): 1}
        assert pair.g == {(0, 1): 1}

    def test_r2(self):
        pair = fg_polys(2)
        assert pair.f == {(2, 0): 1, (0, 2): -1}
        assert pair.g == {(1, 1): 2}

    def test_modulus_identity(self):
        for r in range(1, 11):
            assert fg_polys(r).modulus_identity_holds()

    def test_grid_agrees_with_complex_power(self):
        pair = fg_polys(5)
        f, g = pair.evaluate(0.7, -0.4)
        w = complex(0.7, -0.4) ** 5
        assert f == pytest.approx(w.real, abs=1e-12)
        assert g == pytest.approx(w.imag, abs=1e-12)

    def test_rational_coefficients(self):
        assert all(isinstance(c, Fraction) for c in fg_polys(3).f.values())

    def test_rejects_r(self):
        with pytest.raises(ValueError):
            fg_polys(0)


class TestEquations:
    """Test residuals and analytic gradients."""

    def test_residual_examples(self):
        assert F_eval(1, E1) == (0, 0)
        assert F_eval(2, ORIGIN) == (-1, 0)
        assert F_eval(1, _p(1, 0, 0, 0, 1, 0, 0, 0)) == (0, 1)

    def test_gradient_examples(self):
        grad1, grad2 = grad_F(1, E1)
        assert grad1.tolist() == [2, 0, 0, 0, 0, 0, 0, 0]
        assert grad2[4:].tolist() == [1, 0, 0, 0]

    @pytest.mark.parametrize("r", [1, 2, 3])
    def test_finite_differences(self, r):
        cfg = SampleConfig(seed=11, count=100)
        for p in sample_Qr(r, cfg):
            assert gradient_error(r, p, 1e-5) < 1e-6

    def test_pairing_examples(self):
        numeric, closed = symplectic_pairing(1, E1)
        assert numeric == pytest.approx(2)
        assert closed == pytest.approx(2)
        numeric, _ = symplectic_pairing(2, E1)
        assert numeric == pytest.approx(2)

    def test_pairing_on_degenerate_point(self):
        p = _p(0, 0, 1, 0, 0, 0, 0, 0)
        assert F_eval(2, p) == (0, 0)
        numeric, closed = symplectic_pairing(2, p)
        assert numeric == pytest.approx(8)
        assert closed == pytest.approx(8)

    def test_rank_examples(self):
        assert jacobian_rank(1, E1) == 2
        assert jacobian_rank(2, _p(0, 0, 1, 0, 0, 0, 0, 0)) == 2
        assert jacobian_rank(2, ORIGIN) == 0


class TestSampling:
    """Test seeded samples of Q_r and its strata."""

    @pytest.mark.parametrize("r", [1, 2, 3])
    def test_samples_lie_on_Qr(self, r, sample_config):
        for p in sample_Qr(r, sample_config):
            assert max(abs(v) for v in F_eval(r, p)) < 1e-9
            assert p.x1**2 + p.x2**2 + p.x4**2 > 0

    def test_reproducible(self):
        cfg = SampleConfig(seed=3, count=1000)
        first = np.array([p.as_array() for p in sample_Qr(1, cfg)])
        second = np.array([p.as_array() for p in sample_Qr(1, cfg)])
        assert np.array_equal(first, second)

    def test_sample_depends_only_on_index(self):
        short = sample_Qr(2, SampleConfig(seed=9, count=5))
        long = sample_Qr(2, SampleConfig(seed=9, count=10))
        assert short == long[:5]

    def test_seeds_differ(self):
        assert sample_Qr(2, SampleConfig(seed=1, count=3)) != sample_Qr(2, SampleConfig(seed=2, count=3))

    def test_degenerate_stratum(self, sample_config):
        for p in sample_degenerate_stratum(3, sample_config):
            assert max(abs(v) for v in F_eval(3, p)) < 1e-9
            assert jacobian_rank(3, p) == 2

    @pytest.mark.parametrize("lam", [0.5, 1.0, 2.0])
    def test_leaf_samples(self, lam, sample_config):
        for p in sample_W_leaf(2, lam, sample_config):
            assert max(abs(v) for v in w_leaf_residuals(2, lam, p)) < 1e-9

    def test_leaf_budget_exhausted(self):
        cfg = SampleConfig(seed=0, count=1, rejection_budget=1)
        with pytest.raises(SamplingBudgetError):
            sample_W_leaf(1, 1e-12, cfg)

    def test_dump_samples(self, tmp_path):
        points = sample_Qr(1, SampleConfig(seed=4, count=6))
        target = tmp_path / "samples.csv"
        dump_samples(points, target)
        lines = target.read_text().splitlines()
        assert lines[0] == "x1,x2,x3,x4,y1,y2,y3,y4"
        data = np.loadtxt(target, delimiter=",", skiprows=1)
        assert data.shape == (6, 8)
        assert np.array_equal(data, np.array([p.as_array() for p in points]))


class TestGroupAction:
    """Test the mu_r action and invariance of the equations."""

    def test_full_rotation_is_identity(self):
        p = _p(0.3, -0.2, 0.5, 0.1, 1.0, 2.0, -0.7, 0.4)
        moved = mu_action(5, 2, 5, p)
        assert np.allclose(moved.as_array(), p.as_array(), atol=1e-12)

    def test_half_turn(self):
        p = _p(0.3, -0.2, 0.5, 0.1, 1.0, 2.0, -0.7, 0.4)
        moved = mu_action(2, 1, 1, p)
        expected = [-0.3, 0.2, -0.5, 0.1, -1.0, -2.0, 0.7, 0.4]
        assert np.allclose(moved.as_array(), expected, atol=1e-12)

    @pytest.mark.parametrize("r", [2, 3, 5])
    def test_equations_invariant(self, r, sample_config):
        for a in valid_weights(r):
            for p in sample_Qr(r, sample_config):
                for power in range(1, r + 1):
                    assert invariance_error(r, a, power, p) < 1e-12

    def test_monomial_invariance(self):
        for r in range(1, 8):
            for a in valid_weights(r):
                assert monomial_invariance(r, a)


class TestLeafIdentification:
    """Test Phi_r and the projection to Q_1."""

    def test_identity_for_r1(self):
        p = _p(1, 0, 0, 0, 0, 1, 0, 0)
        assert phi_r_map(1, 1.0, p) == p

    def test_unit_leaf_keeps_orbit(self):
        for p in sample_W_leaf(3, 1.0, SampleConfig(seed=5, count=50)):
            image = phi_r_map(3, 1.0, p)
            assert (image.x1, image.x2, image.x4, image.y1, image.y2, image.y4) == (
                p.x1, p.x2, p.x4, p.y1, p.y2, p.y4,
            )
            before = complex(p.x3, p.y3) ** 3
            after = complex(image.x3, image.y3) ** 3
            assert abs(before - after) < 1e-9

    @pytest.mark.parametrize("r", [1, 2, 3])
    @pytest.mark.parametrize("lam", [0.5, 1.0, 2.0])
    def test_images_on_Q_leaf(self, r, lam):
        for p in sample_W_leaf(r, lam, SampleConfig(seed=13, count=500)):
            image = phi_r_map(r, lam, p)
            assert max(abs(v) for v in q_leaf_residuals(r, lam, image)) < 1e-9

    def test_off_leaf_rejected(self):
        with pytest.raises(LeafMembershipError):
            phi_r_map(2, 1.0, ORIGIN)

    def test_nonpositive_lambda(self):
        with pytest.raises(ValueError):
            phi_r_map(1, 0.0, E1)

    def test_projection_example(self):
        image = pi_projection(2, _p(0.5, 0, 1, 0, 0, 0, 0, 0))
        assert (image.x3, image.y3) == (1, 0)
        assert image.x1 == 0.5

    @pytest.mark.parametrize("r", [2, 3])
    def test_projection_commutes(self, r, sample_config):
        for p in sample_W_leaf(r, 2.0, sample_config):
            assert projection_commutator(r, 2.0, p) < 1e-9

    @pytest.mark.parametrize("r", [2, 3, 5])
    def test_projection_equivariant(self, r, sample_config):
        for p in sample_Qr(r, sample_config):
            assert projection_equivariance_error(r, 1, 1, p) < 1e-9

    @pytest.mark.parametrize("r", [1, 2, 3])
    def test_exceptional_set_projects_into_L1(self, r, sample_config):
        for p in sample_exceptional_set(r, sample_config):
            assert exceptional_set_member(r, p)
            assert exceptional_set_member(1, pi_projection(r, p))

    def test_exceptional_set_membership_fails_off_set(self):
        assert not exceptional_set_member(1, _p(1, 0, 0, 0, 1, 0, 0, 0))


class TestCertify:
    """Test seeded certification runs."""

    @pytest.mark.parametrize("r", [1, 2, 3])
    def test_certification_passes(self, r):
        report = certify(r, SampleConfig(seed=0, count=1000))
        failed = [c.name for c in report.checks if not c.passed]
        assert failed == []
        assert report.passed
        assert all(c.samples > 0 for c in report.checks)

    def test_default_weight(self):
        assert certify(1, SampleConfig(seed=1, count=10)).a == 0
        assert certify(3, SampleConfig(seed=1, count=10)).a == 1

    def test_explicit_weight(self):
        report = certify(3, SampleConfig(seed=2, count=20), a=2)
        assert report.a == 2
        assert report.passed

    def test_closed_form_gap_reported(self):
        report = certify(2, SampleConfig(seed=3, count=50))
        # the displayed closed form carries f where the direct sum has f^2
        gap = report.closed_form_max_gap
        assert gap.value > 0
        assert not math.isnan(gap.value)
        assert gap.tol_eq == 1e-9
        assert not gap.within_tolerance

    def test_closed_form_gap_carries_run_tolerance(self):
        report = certify(2, SampleConfig(seed=3, count=10, tol_eq=1e-6))
        assert report.closed_form_max_gap.tol_eq == 1e-6

    def test_check_names(self):
        names = {c.name for c in certify(1, SampleConfig(seed=0, count=5)).checks}
        assert {"equation_residual", "jacobian_rank", "symplectic_pairing", "phi_leaf"} <= names
