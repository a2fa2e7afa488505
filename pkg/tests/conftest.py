import numpy as np
import pytest

from coorbital.hill import MassConfig, lagrange_equilibrium


@pytest.fixture(scope="session")
def masses_1e3():
    return MassConfig.equal_pair(1e-3)


@pytest.fixture(scope="session")
def equilibrium_1e3(masses_1e3):
    return lagrange_equilibrium(masses_1e3)


def random_admissible_state(rng, mass_scale=1e-3):
    """Random state with consistent C; returns (array, C)."""
    r1, r2 = 0.25 + 0.2 * rng.random(2)
    w1, w2 = 2 * np.pi * rng.random(2)
    G1, G2 = 4e-4 * mass_scale / 1e-3 * (1.0 + rng.random(2))
    R1, R2 = 2e-6 * (rng.random(2) - 0.5)
    J = np.pi * rng.random()
    C = np.sqrt(G1 * G1 + G2 * G2 + 2 * G1 * G2 * np.cos(J))
    arr = np.array([r1, w1, R1, G1, r2, w2, R2, G2])
    return arr, C
