import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from lieformal import fixture  # noqa: E402

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")

POISSON_FIXTURES = ["r2-symplectic", "r4-symplectic", "so3", "quadratic"]


@pytest.fixture(scope="session")
def so3():
    return fixture("so3")


@pytest.fixture(scope="session")
def r2():
    return fixture("r2-symplectic")


@pytest.fixture(scope="session")
def r4():
    return fixture("r4-symplectic")


@pytest.fixture(scope="session")
def quadratic():
    return fixture("quadratic")


@pytest.fixture(scope="session")
def nonpoisson():
    return fixture("non-poisson")


@pytest.fixture(scope="session", params=POISSON_FIXTURES)
def poisson(request):
    return fixture(request.param)
