import pytest

from burgers_asymptotics import LeadingTail, find_zc, single, two_term


@pytest.fixture(scope="session")
def unit_single():
    return single(1.0, 0.5)


@pytest.fixture(scope="session")
def unit_two_term():
    return two_term(1.0, 0.5, 1.0, 0.6)


@pytest.fixture(scope="session")
def unit_structure():
    return find_zc(LeadingTail(1.0, 0.5))
