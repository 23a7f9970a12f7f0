import pytest
import numpy as np

from horizonlab.api import Harness
from horizonlab.ritz import ModelHamiltonian, convergence_study
from horizonlab.spectral import SpectralModel


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def harness(tmp_path):
    return Harness(debug=True, cache_dir=tmp_path / "cache")


@pytest.fixture
def two_level():
    """E = {0, 1}, c = (1/sqrt 2, 1/sqrt 2), hbar = 1."""
    return SpectralModel.equal([0.0, 1.0])


@pytest.fixture
def model_200():
    return SpectralModel.random(200, seed=7, equal_weights=True)


@pytest.fixture(scope="session")
def quartic_study():
    """Coupled quartic, lambda = 0.1, 6 to 14 states per mode against 24, ten levels."""
    return convergence_study(ModelHamiltonian.coupled_quartic(0.1), (6, 8, 10, 12, 14), 10, 24)
