import numpy as np
import pytest

from rwmau.data import Dataset
from rwmau.datasets import write_benchmark_suite


@pytest.fixture(scope="session")
def suite_dir(tmp_path_factory):
    """Stand-in .dat files for the whole 21-dataset benchmark catalog."""
    out = tmp_path_factory.mktemp("suite")
    write_benchmark_suite(str(out))
    return out


@pytest.fixture()
def toy_blobs():
    """Separable imbalanced blobs: 12 minority around (0,0), 48 majority around (6,6)."""
    rng = np.random.default_rng(7)
    x_min = rng.normal(0.0, 0.4, size=(12, 2))
    x_maj = rng.normal(6.0, 0.4, size=(48, 2))
    features = np.vstack([x_min, x_maj])
    labels = np.concatenate([np.ones(12, dtype=int), np.zeros(48, dtype=int)])
    return Dataset(features, labels)


def make_dataset(features, labels):
    return Dataset(np.asarray(features, dtype=float), np.asarray(labels, dtype=int))
