import numpy as np
import pytest

from freqcip import (AlgoConfig, FrequencyGrid, MediumProfile, SpatialGrid, add_noise,
                     extract_boundary_data, reconstruct)

INCLUSION = (0.25, 1.0 / 3.0)
NOISE_SEED = 0


@pytest.fixture(scope="session")
def grid():
    return SpatialGrid()


@pytest.fixture(scope="session")
def freq():
    return FrequencyGrid()


@pytest.fixture(scope="session")
def profiles(grid):
    return {ct: MediumProfile.inclusion(grid, ct) for ct in (4.0, 7.0)}


@pytest.fixture(scope="session")
def data(profiles, freq):
    return {ct: extract_boundary_data(p, freq) for ct, p in profiles.items()}


@pytest.fixture(scope="session")
def trivial_data(grid, freq):
    return extract_boundary_data(MediumProfile.homogeneous(grid), freq)


class _Runs:
    """Lazily computed reconstructions shared across test modules."""

    def __init__(self, data):
        self._data = data
        self._cache = {}

    def get(self, key):
        if key not in self._cache:
            ct, noise = key
            d = self._data[ct]
            cfg = AlgoConfig(K=10, m=5)
            if noise:
                d = add_noise(d, noise, NOISE_SEED)
                cfg = AlgoConfig(K=10, m=5, noise_level=noise, seed=NOISE_SEED)
            self._cache[key] = reconstruct(d, cfg)
        return self._cache[key]


@pytest.fixture(scope="session")
def runs(data):
    return _Runs(data)

