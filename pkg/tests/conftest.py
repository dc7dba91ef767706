import pytest

from skolemset import arith


@pytest.fixture(scope="session")
def table_1e5():
    return arith.prime_sieve(10**5)


@pytest.fixture(scope="session")
def table_1e6():
    return arith.prime_sieve(10**6 + 10)


@pytest.fixture(scope="session")
def table_2e6():
    return arith.prime_sieve(2 * 10**6 + 10)
