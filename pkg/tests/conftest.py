import numpy as np
import pytest

from gtbsplines import build_space
from gtbsplines.config import conic_profile_demo_config, mixed_family_demo_config


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture(scope="session")
def mixed_space():
    return build_space(mixed_family_demo_config())


@pytest.fixture(scope="session")
def profile_config():
    return conic_profile_demo_config()


@pytest.fixture(scope="session")
def profile_space(profile_config):
    return build_space(profile_config)
