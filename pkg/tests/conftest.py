from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for `oracles` imports

from iterintent.core import UtteranceRecord, validate_dataset


def records_from_matrix(matrix, golds=None, prefix="r"):
    matrix = np.asarray(matrix, dtype=np.float64)
    golds = golds if golds is not None else [None] * len(matrix)
    return [
        UtteranceRecord(id=f"{prefix}{i}", text=f"text {i}", embedding=row,
                        gold_label=g)
        for i, (row, g) in enumerate(zip(matrix, golds))
    ]


def dataset_from_matrix(matrix, golds=None):
    return validate_dataset(records_from_matrix(matrix, golds))


@pytest.fixture
def small_dataset():
    return dataset_from_matrix([
        [1.0, 0.0],
        [0.9, 0.1],
        [0.0, 1.0],
        [0.1, 0.9],
        [1.0, 1.0],
    ])


def random_unit_rows(rng, n, dim):
    raw = rng.normal(size=(n, dim))
    return raw / np.linalg.norm(raw, axis=1, keepdims=True)
