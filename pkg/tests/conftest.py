import numpy as np
import pytest

from hypervote.data_io import RawDataset, iris_path, load_csv


@pytest.fixture(scope="session")
def iris() -> RawDataset:
    return load_csv(iris_path(), "species")


@pytest.fixture
def toy_two_class() -> RawDataset:
    """Four units, one feature, split 3/1 across two bins, classes 2+2."""
    return RawDataset(
        values=np.array([[0.0], [0.0], [0.0], [10.0]]),
        labels=np.array([1, 1, 2, 2]),
        feature_names=("x",),
        label_names=("a", "b"),
    )


def random_dataset(rng, n_units, n_features, n_classes) -> RawDataset:
    """Random dataset where every class has at least one unit."""
    values = rng.normal(size=(n_units, n_features))
    labels = np.concatenate(
        [np.arange(1, n_classes + 1), rng.integers(1, n_classes + 1, n_units - n_classes)]
    )
    rng.shuffle(labels)
    return RawDataset(
        values,
        labels.astype(np.int64),
        tuple(f"f{j}" for j in range(n_features)),
        tuple(f"c{k}" for k in range(n_classes)),
    )
