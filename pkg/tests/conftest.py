import pytest
from hypothesis import HealthCheck, settings

from syzforge.ring import GF, QQ, PolyRing

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def R():
    return PolyRing(("x", "y", "z"), QQ)


@pytest.fixture
def xyz(R):
    return R.gens()


@pytest.fixture
def R7():
    return PolyRing(("x", "y", "z"), GF(7))
