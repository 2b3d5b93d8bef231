import pytest

from grasslab.grassmann import build_index


@pytest.fixture(scope="session")
def idx22():
    return build_index(2, 2)


@pytest.fixture(scope="session")
def idx32():
    return build_index(3, 2)


@pytest.fixture(scope="session")
def idx23():
    return build_index(2, 3)
