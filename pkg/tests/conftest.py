import pytest

from adjkit import GenericContext


@pytest.fixture(scope="session")
def ctx2():
    return GenericContext(2)


@pytest.fixture(scope="session")
def ctx3():
    return GenericContext(3)


@pytest.fixture(scope="session")
def ctx4():
    return GenericContext(4)


@pytest.fixture(scope="session")
def ctx5():
    return GenericContext(5)
