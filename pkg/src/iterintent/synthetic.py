"""Seeded synthetic datasets for benchmarks and fixtures.

Points live near class centers on the unit sphere so cosine-distance
structure is controlled: within-class distances scale with `spread`,
between-class distances with the center geometry.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .core import Dataset, UtteranceRecord, validate_dataset


def make_blobs(
    class_sizes: Sequence[int],
    dim: int,
    seed: int,
    spread: float | Sequence[float] = 0.02,
    orthonormal_centers: bool = False,
    noise_points: int = 0,
    intents: Sequence[str] | None = None,
    shuffle: bool = False,
) -> Dataset:
    """Gaussian blobs around unit-sphere centers, plus optional uniform
    background points (gold label None).

    orthonormal_centers makes all between-class cosine distances exactly 1
    (requires dim >= number of classes); otherwise centers are random unit
    vectors, which can overlap and is useful for messy test data.
    """
    k = len(class_sizes)
    if intents is None:
        intents = [f"intent_{c}" for c in range(k)]
    if len(intents) != k:
        raise ValueError("need one intent name per class")
    spreads = [spread] * k if isinstance(spread, (int, float)) else list(spread)
    if len(spreads) != k:
        raise ValueError("need one spread per class")

    rng = np.random.default_rng(seed)
    if orthonormal_centers:
        if dim < k:
            raise ValueError(f"orthonormal centers need dim >= {k}")
        q, _ = np.linalg.qr(rng.normal(size=(dim, k)))
        centers = q.T[:k]
    else:
        raw = rng.normal(size=(k, dim))
        centers = raw / np.linalg.norm(raw, axis=1, keepdims=True)

    vectors: list[np.ndarray] = []
    golds: list[str | None] = []
    for c, size in enumerate(class_sizes):
        pts = centers[c] + spreads[c] * rng.normal(size=(size, dim))
        vectors.extend(pts)
        golds.extend([intents[c]] * size)
    if noise_points:
        raw = rng.normal(size=(noise_points, dim))
        vectors.extend(raw / np.linalg.norm(raw, axis=1, keepdims=True))
        golds.extend([None] * noise_points)

    order = np.arange(len(vectors))
    if shuffle:
        rng.shuffle(order)
    records = [
        UtteranceRecord(
            id=f"u{pos:05d}",
            text=f"sample utterance {pos} ({golds[i] or 'background'})",
            embedding=np.asarray(vectors[i], dtype=np.float64),
            gold_label=golds[i],
        )
        for pos, i in enumerate(order.tolist())
    ]
    return validate_dataset(records)
