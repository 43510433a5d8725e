import numpy as np
import pytest
from hypothesis import HealthCheck, settings

# Fixed-seed property runs: every randomized suite draws >= 100 instances.
settings.register_profile("nclimit", max_examples=100, derandomize=True, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("nclimit")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def natural():
    from nclimit.kinematics import PhysicalParams

    return PhysicalParams()


def pytest_collection_modifyitems(items):
    # every hypothesis-driven test belongs to the property suite
    for item in items:
        if getattr(getattr(item, "obj", None), "is_hypothesis_test", False):
            item.add_marker(pytest.mark.property)
