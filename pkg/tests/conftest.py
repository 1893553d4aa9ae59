import pytest

from quartic_lattice.k3model import build_period_lattice


@pytest.fixture(scope="session")
def P():
    return build_period_lattice()
