import random

import pytest

from weylalg import Context


@pytest.fixture
def ctx1():
    return Context(1, 8)


@pytest.fixture
def ctx2():
    return Context(2, 8)


@pytest.fixture
def rng():
    return random.Random(20260814)
