import time

import pytest

from nicrobin import A2PLUS3B2, MOD4, PrimePool, compute_X, enumerate_exceptions


@pytest.fixture(scope="session")
def mod4():
    return MOD4


@pytest.fixture(scope="session")
def a23():
    return A2PLUS3B2


@pytest.fixture(scope="session")
def mod4_pool(mod4):
    return PrimePool(mod4)


@pytest.fixture(scope="session")
def mod4_xset(mod4, mod4_pool):
    return compute_X(mod4, mod4_pool)


@pytest.fixture(scope="session")
def mod4_exceptions(mod4):
    t0 = time.time()
    exc = enumerate_exceptions(mod4)
    return exc, time.time() - t0


@pytest.fixture(scope="session")
def a23_exceptions(a23):
    t0 = time.time()
    exc = enumerate_exceptions(a23)
    return exc, time.time() - t0
