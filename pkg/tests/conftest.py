import numpy as np
import pytest

from sparsecc import normalize_arrays

import worked_example


@pytest.fixture(scope="session")
def worked_raw():
    return worked_example.raw_matrices()


@pytest.fixture(scope="session")
def worked_ds(worked_raw):
    x, y = worked_raw
    return normalize_arrays(x, y, node_ids=("v1", "v2", "v3", "v4"))


@pytest.fixture()
def rng():
    return np.random.default_rng(20240811)


def random_dataset(rng, n_obs=12, n_nodes=10):
    x = rng.standard_normal((n_obs, n_nodes))
    y = rng.standard_normal((n_obs, n_nodes))
    return normalize_arrays(x, y)
