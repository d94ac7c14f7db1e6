import pytest

from kstarlab.averages import RunConstants


@pytest.fixture(scope="session")
def rc():
    return RunConstants.at()


@pytest.fixture(scope="session")
def c2(rc):
    return rc.c2
