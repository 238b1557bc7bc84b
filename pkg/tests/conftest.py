import math

import pytest

from forms.manifold import ModelManifold, circle, sphere2, sphere3, torus
from runner.models import lutz_t3

TWO_PI = 2.0 * math.pi


@pytest.fixture
def t2():
    return torus(2, 16)


@pytest.fixture
def s2():
    return ModelManifold([sphere2(24)], name="S2")


@pytest.fixture
def s3():
    return ModelManifold([sphere3(8)], name="S3")


@pytest.fixture
def lutz(t2):
    return lutz_t3(t2)


@pytest.fixture
def t2s2_base():
    return ModelManifold([circle(8), circle(8), sphere2(12)], name="T2xS2")
