import pytest

from invsem import fixtures


@pytest.fixture(scope="session")
def catalog():
    return fixtures.catalog()


@pytest.fixture(scope="session")
def lsd_fixtures():
    return fixtures.lsd_fixtures()


@pytest.fixture(scope="session")
def rsd_fixtures():
    return fixtures.rsd_fixtures()
