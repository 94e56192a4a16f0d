import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_disk_points(rng, n, cap=0.8):
    r = cap * np.sqrt(rng.uniform(size=n))
    return tuple(complex(x) for x in r * np.exp(2j * np.pi * rng.uniform(size=n)))
