"""
Pytest configuration and shared fixtures for orbiflop tests.
"""

import json
import sys
from pathlib import Path

import pytest

# Make the package importable without installation
sys.path.insert(0, str(Path(__file__).parent.parent))

from orbiflop.config import get_settings  # noqa: E402
from orbiflop.core.charts import assemble_chart_rings  # noqa: E402
from orbiflop.models.schemas import ConifoldConfig, GlobalRingData, SampleConfig  # noqa: E402

# Fixtures directory
FIXTURES_DIR = Path(__file__).parent / "fixtures"


def load_fixture(path: str) -> dict:
    """Load a JSON fixture file."""
    fixture_path = FIXTURES_DIR / path
    with open(fixture_path, "r") as f:
        return json.load(f)


@pytest.fixture(autouse=True)
def fresh_settings():
    """Drop cached settings so environment overrides in one test do not leak."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def sample_config():
    """Small seeded sampling configuration."""
    return SampleConfig(seed=7, count=100)


@pytest.fixture
def trivial_ring():
    """Ring with only 1 and vol and no rays."""
    return GlobalRingData.model_validate(load_fixture("ring_trivial.json"))


@pytest.fixture
def one_chart_rings():
    """Flop pair glued from a single r=2 chart."""
    return assemble_chart_rings([(2, 1)], seed=3)


@pytest.fixture
def two_chart_rings():
    """Flop pair glued from charts with r=2 and r=3."""
    return assemble_chart_rings([(2, 1), (3, 2)], seed=11)


@pytest.fixture
def fixtures_dir():
    """Directory holding the JSON fixtures."""
    return FIXTURES_DIR


@pytest.fixture
def resolve_config():
    """Three singular points with theta rows (1, 1, 0) and (0, 1, 1)."""
    return ConifoldConfig.model_validate(load_fixture("resolve_config.json"))


@pytest.fixture
def identity_config():
    """Two singular points with independent Thom classes (no symplectic resolution)."""
    return ConifoldConfig.model_validate(load_fixture("resolve_identity.json"))
