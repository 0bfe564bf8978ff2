import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from armsim.arm_model import default_arm

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def arm():
    return default_arm()


def random_q(arm, rng, n=None):
    """Uniform joint configurations inside the limits."""
    size = (6,) if n is None else (n, 6)
    return rng.uniform(arm.lower_limits, arm.upper_limits, size=size)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
