import numpy as np
import pytest

from fgb.toydata import write_toy_dataset


@pytest.fixture(scope="session")
def toy_root(tmp_path_factory):
    return tmp_path_factory.mktemp("toy")


@pytest.fixture(scope="session")
def toy_manifest(toy_root):
    """500-image 32x32 toy corpus, all TRAIN."""
    return write_toy_dataset(toy_root, n=500, size=32, seed=0)


@pytest.fixture(scope="session")
def toy_split_manifest(tmp_path_factory):
    """Smaller toy corpus with a held-out balanced test split."""
    root = tmp_path_factory.mktemp("toy_split")
    return write_toy_dataset(root, n=120, size=32, seed=3, test_per_class=10)


@pytest.fixture(scope="session")
def toy_clf_manifest(tmp_path_factory):
    """Classifier-scale toy corpus: enough steps for optimizers to move."""
    root = tmp_path_factory.mktemp("toy_clf")
    return write_toy_dataset(root, n=500, size=32, seed=3, test_per_class=20)


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
