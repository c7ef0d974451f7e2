"""
Pytest Configuration and Fixtures
Provides shared scenarios, kernels and grids for all test modules.
"""
import os

import numpy as np
import pytest

os.environ.setdefault('DIPOLAR_EIT_LOG_LEVEL', 'WARNING')

from dipolar_eit import create_app  # noqa: E402
from dipolar_eit.models.kernel import DdiKernel  # noqa: E402
from dipolar_eit.models.medium import make_grid, uniform_spinwave  # noqa: E402
from tests.factories import ScenarioParamsFactory  # noqa: E402


@pytest.fixture(scope='session')
def app():
    """Create application instance for testing"""
    return create_app('testing')


@pytest.fixture
def reference_params():
    return ScenarioParamsFactory()


@pytest.fixture
def kernel(reference_params):
    return DdiKernel.from_params(reference_params)


@pytest.fixture
def square_kernel(reference_params):
    return DdiKernel.from_params(reference_params, 'square')


@pytest.fixture
def grid(reference_params):
    """32-interval grid with a single time step, for frequency-domain work"""
    return make_grid(reference_params, 32, n_t=1)


@pytest.fixture
def spinwave(reference_params, grid):
    return uniform_spinwave(reference_params, grid)


@pytest.fixture
def output_dir(tmp_path):
    path = tmp_path / 'out'
    path.mkdir()
    return path


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)
