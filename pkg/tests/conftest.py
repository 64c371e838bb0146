import pytest

from graphfactor.census import run_census


@pytest.fixture(scope="session")
def order6_records():
    return run_census(6)
