import numpy as np
import pytest

from spin1topo.hamiltonians import MHZ_TO_RAD_PER_US

# Field magnitude used throughout: 10 * 2pi MHz in rad/us.
HR = 10.0 * MHZ_TO_RAD_PER_US


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)


def random_hermitian(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (a + a.conj().T) / 2.0
