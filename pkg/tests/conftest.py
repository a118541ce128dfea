import pytest

from walkdim.ifs import preset


@pytest.fixture(scope="session")
def sg():
    return preset("sg")


@pytest.fixture(scope="session")
def segment():
    return preset("segment")
