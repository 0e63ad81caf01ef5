import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "package",
    max_examples=50,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("package")


@pytest.fixture(scope="session")
def ligo():
    from cslbounds import load_detector_config

    return load_detector_config("ligo")


@pytest.fixture(scope="session")
def lisa():
    from cslbounds import load_detector_config

    return load_detector_config("lisa_pathfinder")


@pytest.fixture(scope="session")
def auriga():
    from cslbounds import load_detector_config

    return load_detector_config("auriga")


def log_grid(lo, hi, n):
    return np.geomspace(lo, hi, n)
