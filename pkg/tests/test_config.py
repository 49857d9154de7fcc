"""
Tests for settings and input schema validation.
"""

import pytest
from pydantic import ValidationError

from orbiflop.config import Settings, get_settings
from orbiflop.models.schemas import (
    ConifoldConfig,
    FlopCorrespondence,
    GlobalRingData,
    RuanVerifyConfig,
    SampleConfig,
    SingularityParams,
)
from orbiflop.utils.errors import ConfigError, OrbiflopError


def _ring(**overrides):
    data = {
        "basis": [
            {"label": "1", "degree": 0},
            {"label": "H", "degree": 2},
            {"label": "vol", "degree": 6},
        ],
        "pairing": [[0, 0, 1], [0, 1, 0], [1, 0, 0]],
        "rays": [{"id": "t", "multiplicity": 3}],
    }
    data.update(overrides)
    return data


class TestSettings:
    """Test environment-driven settings."""

    def test_defaults(self, monkeypatch):
        monkeypatch.delenv("ORBIFLOP_MAX_KAPPA", raising=False)
        settings = Settings(_env_file=None)
        assert settings.max_kappa == 20
        assert settings.oracle_trials == 1000
        assert settings.series_order == 50
        assert settings.default_count == 1000
        assert settings.tol_eq == 1e-9

    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("ORBIFLOP_MAX_KAPPA", "5")
        monkeypatch.setenv("ORBIFLOP_TOL_EQ", "1e-6")
        settings = get_settings()
        assert settings.max_kappa == 5
        assert settings.tol_eq == 1e-6

    def test_invalid_env_value(self, monkeypatch):
        monkeypatch.setenv("ORBIFLOP_MAX_KAPPA", "0")
        with pytest.raises(ValidationError):
            Settings(_env_file=None)

    def test_cached(self):
        assert get_settings() is get_settings()


class TestSampleConfig:
    """Test sampling configuration built from settings."""

    def test_from_settings(self):
        cfg = SampleConfig.from_settings(Settings(_env_file=None), seed=3, count=None)
        assert cfg.seed == 3
        assert cfg.count == 1000
        assert cfg.rejection_budget == 10000

    def test_env_reaches_sample_config(self, monkeypatch):
        monkeypatch.setenv("ORBIFLOP_DEFAULT_COUNT", "25")
        assert SampleConfig.from_settings(get_settings()).count == 25

    def test_rejects_negative_seed(self):
        with pytest.raises(ValidationError):
            SampleConfig(seed=-1)


class TestSingularityParams:
    """Test (r, a) validation."""

    @pytest.mark.parametrize("r,a", [(1, 0), (2, 1), (5, 3), (6, 5)])
    def test_valid(self, r, a):
        assert SingularityParams(r=r, a=a).r == r

    @pytest.mark.parametrize("r,a", [(1, 1), (3, 0), (3, 3), (4, 2), (0, 0)])
    def test_invalid(self, r, a):
        with pytest.raises(ValidationError):
            SingularityParams(r=r, a=a)


class TestConifoldConfig:
    """Test the resolution solver input."""

    def test_theta_matrix(self, resolve_config):
        m = resolve_config.theta_matrix()
        assert (m.rows, m.cols) == (2, 3)

    def test_rational_strings(self):
        config = ConifoldConfig(kappa=1, singularities=[{"r": 1, "a": 0}], theta=[["-3/4"]])
        assert str(config.theta_matrix().entries[0][0]) == "-3/4"

    def test_singularity_count(self):
        with pytest.raises(ValidationError, match="expected 2 singularities"):
            ConifoldConfig(kappa=2, singularities=[{"r": 2, "a": 1}])

    def test_row_length(self):
        with pytest.raises(ValidationError, match="theta row 0"):
            ConifoldConfig(kappa=1, singularities=[{"r": 2, "a": 1}], theta=[[1, 2]])

    def test_rejects_floats(self):
        with pytest.raises(ValidationError):
            ConifoldConfig(kappa=1, singularities=[{"r": 2, "a": 1}], theta=[[0.5]])

    def test_rejects_bad_string(self):
        with pytest.raises(ValidationError):
            ConifoldConfig(kappa=1, singularities=[{"r": 2, "a": 1}], theta=[["1/0"]])


class TestGlobalRingData:
    """Test consistency checks on global ring data."""

    def test_valid(self):
        ring = GlobalRingData.model_validate(_ring(ray_pairings={"H": {"t": 1}}))
        assert ring.labels == ["1", "H", "vol"]
        assert ring.ray_value("H", "t") == 1
        assert ring.ray_value("1", "t") == 0
        assert ring.multiplicities == {"t": 3}

    def test_missing_constants_are_zero(self):
        ring = GlobalRingData.model_validate(
            _ring(classical_constants=[{"inputs": ["1", "1", "vol"], "value": 1}])
        )
        assert ring.classical("vol", "1", "1") == 1
        assert ring.classical("H", "H", "H") == 0

    def test_duplicate_labels(self):
        basis = [{"label": "1", "degree": 0}, {"label": "1", "degree": 6}]
        with pytest.raises(ValidationError, match="unique"):
            GlobalRingData.model_validate(_ring(basis=basis, pairing=[[0, 1], [1, 0]]))

    def test_pairing_shape(self):
        with pytest.raises(ValidationError, match="3x3"):
            GlobalRingData.model_validate(_ring(pairing=[[0, 1], [1, 0]]))

    def test_singular_pairing(self):
        with pytest.raises(ValidationError, match="singular"):
            GlobalRingData.model_validate(_ring(pairing=[[0, 0, 1], [0, 0, 0], [1, 0, 0]]))

    def test_unknown_label_in_constant(self):
        with pytest.raises(ValidationError, match="unknown label"):
            GlobalRingData.model_validate(_ring(classical_constants=[{"inputs": ["1", "1", "x"], "value": 1}]))

    def test_inconsistent_constants(self):
        constants = [
            {"inputs": ["1", "H", "H"], "value": 1},
            {"inputs": ["H", "1", "H"], "value": 2},
        ]
        with pytest.raises(ValidationError, match="not symmetric"):
            GlobalRingData.model_validate(_ring(classical_constants=constants))

    def test_ray_pairing_needs_degree_two(self):
        with pytest.raises(ValidationError, match="expected 2"):
            GlobalRingData.model_validate(_ring(ray_pairings={"vol": {"t": 1}}))

    def test_ray_pairing_unknown_ray(self):
        with pytest.raises(ValidationError, match="unknown ray"):
            GlobalRingData.model_validate(_ring(ray_pairings={"H": {"s": 1}}))

    def test_twisted_partner_required(self):
        basis = _ring()["basis"] + [{"label": "p_t_1", "degree": 1}]
        pairing = [[0, 0, 1, 0], [0, 0, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0]]
        with pytest.raises(ValidationError, match="complementary sector"):
            GlobalRingData.model_validate(_ring(basis=basis, pairing=pairing))

    def test_twisted_sector_range(self):
        basis = _ring()["basis"] + [{"label": "q_t_3", "degree": 1}]
        pairing = [[0, 0, 1, 0], [0, 0, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0]]
        with pytest.raises(ValidationError, match="1 <= k < 3"):
            GlobalRingData.model_validate(_ring(basis=basis, pairing=pairing))


class TestFlopCorrespondence:
    """Test correspondence construction and inversion."""

    def test_identity(self):
        corr = FlopCorrespondence.identity(["1", "vol"], ["t"])
        assert corr.class_map == {"1": "1", "vol": "vol"}
        assert corr.ray_map == {"t": "t"}

    def test_inverted(self):
        corr = FlopCorrespondence(class_map={"a": "x", "b": "y"}, ray_map={"s": "t"})
        inverse = corr.inverted()
        assert inverse.class_map == {"x": "a", "y": "b"}
        assert inverse.ray_map == {"t": "s"}
        assert inverse.inverted() == corr

    def test_not_injective(self):
        with pytest.raises(ValidationError, match="class_map is not injective"):
            FlopCorrespondence(class_map={"a": "x", "b": "x"})
        with pytest.raises(ValidationError, match="ray_map is not injective"):
            FlopCorrespondence(class_map={}, ray_map={"s": "t", "u": "t"})


class TestRuanVerifyConfig:
    """Test the choice between charts and explicit rings."""

    def test_charts(self):
        config = RuanVerifyConfig(charts=[{"r": 2, "a": 1}])
        assert config.ring_x is None

    def test_both_sources(self):
        with pytest.raises(ValidationError, match="not both"):
            RuanVerifyConfig(charts=[{"r": 2, "a": 1}], ring_x=_ring())

    def test_empty_charts(self):
        with pytest.raises(ValidationError, match="must not be empty"):
            RuanVerifyConfig(charts=[])

    def test_missing_ring(self):
        with pytest.raises(ValidationError, match="all required"):
            RuanVerifyConfig(ring_x=_ring(), ring_y=_ring())


class TestErrors:
    """Test the error hierarchy."""

    def test_config_error(self):
        error = ConfigError("bad field", field="singularities.0")
        assert isinstance(error, OrbiflopError)
        assert error.message == "bad field"
        assert error.field == "singularities.0"
