import pytest

from weylprod.irrational import parse_alpha


@pytest.fixture(scope="session")
def sqrt2m1():
    return parse_alpha("sqrt2m1")


@pytest.fixture(scope="session")
def golden():
    return parse_alpha("golden")
