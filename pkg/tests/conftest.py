import numpy as np
import pytest

from aerolink import SystemConfig, build_layout


@pytest.fixture(scope="session")
def layout():
    return build_layout(3, 800.0, 25.0)


@pytest.fixture
def small_cfg():
    """Desk-scale config for fast per-test drops."""
    return SystemConfig(n_ues=(12,), n_drops=3, master_seed=42)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
