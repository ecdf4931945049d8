import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from zonelab.nets import build_saturated_net

settings.register_profile(
    "zonelab",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("zonelab")


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture(scope="session")
def net3_fine():
    """omega = 0.005 net on S^2 (exhausted, ~350k points)."""
    return build_saturated_net(3, 0.005, 5)


@pytest.fixture(scope="session")
def net3_coarse():
    return build_saturated_net(3, 0.01, 3)


@pytest.fixture(scope="session")
def net4_coarse():
    return build_saturated_net(4, 0.1, 4)
