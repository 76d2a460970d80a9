import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "ci",
    derandomize=True,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
    deadline=None,
)
settings.load_profile("ci")


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # compile jitted kernels once so timed acceptance criteria see warm code
    from fejercert import _kernels

    _kernels.warm_up()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
