import pytest

from mtkt.group import default_context
from mtkt.rng import Rng


@pytest.fixture(scope="session")
def ctx():
    return default_context()


@pytest.fixture()
def rng():
    return Rng(20240801)


@pytest.fixture(scope="session")
def paillier_23():
    """One 2048-bit threshold Paillier key reused across tests (keygen is
    the expensive part; the key material itself is stateless)."""
    from mtkt.encryption import paillier_keygen
    return paillier_keygen(Rng(777), t=2, n_parties=3)


@pytest.fixture(scope="session")
def world10():
    """A deployed system (max_ticket=10, 2-of-3) shared by read-only tests."""
    from mtkt.actors import World
    return World.build(max_ticket=10, t=2, n_authorities=3, seed=11)
