import numpy as np
import pytest

from treeselect import Dataset


@pytest.fixture
def line_dataset():
    """x1 = 1..4 with a constant padding column (datasets need p >= 2)."""

    def make(labels):
        X = np.column_stack([np.arange(1.0, len(labels) + 1.0),
                             np.zeros(len(labels))])
        return Dataset(X, np.asarray(labels))

    return make


def random_dataset(rng, n, p, ensure_both_labels=True):
    X = rng.standard_normal((n, p))
    y = rng.integers(0, 2, size=n)
    if ensure_both_labels:
        if y.sum() == 0:
            y[0] = 1
        elif y.sum() == n:
            y[0] = 0
    return Dataset(X, y)
