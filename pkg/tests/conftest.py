import numpy as np
import pytest

from dampedwave import _evalcore
from dampedwave.norms import data_library, default_rule


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Trigger any JIT compilation once, outside timed sections."""
    from dampedwave import multipliers as M

    r = np.linspace(0.0, 3.0, 64)
    M.k0_hat(r, 2.0)
    M.k1_hat(r, 2.0)
    M.cutoffs().chi_M(r)
    M.wave_profile_multiplier(1, 3)(r, 2.0)
    M.diffusive_profile_multiplier(2, 2)(r, 2.0)
    M.remainder_multiplier(1, 1, 1, "ALL")(r, 2.0)
    return _evalcore.backend_name()


@pytest.fixture(scope="session")
def gaussian():
    return data_library("gaussian", sigma=1.0)


@pytest.fixture(scope="session")
def rule():
    return default_rule()


@pytest.fixture()
def rng():
    return np.random.default_rng(20240717)
