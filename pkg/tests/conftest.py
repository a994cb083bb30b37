import numpy as np
import pytest

from boundstates import PotentialSpec, make_grid, sample_potential


@pytest.fixture(scope="session")
def fine_grid():
    return make_grid(12.0, 2401)


@pytest.fixture(scope="session")
def gaussian_fine(fine_grid):
    return sample_potential(PotentialSpec.gaussian(), fine_grid)


@pytest.fixture(scope="session")
def poschl_teller_fine(fine_grid):
    return sample_potential(PotentialSpec.poschl_teller(), fine_grid)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
