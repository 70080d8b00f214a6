"""Cosine distance and epsilon-neighborhood queries.

Neighbor search is exact brute force. Batched matrix products are used for
throughput; the neighborhood boundary is inclusive (distance <= eps).
"""

from __future__ import annotations

import numpy as np

from .core import Dataset
from .errors import DimensionMismatch, IndexOutOfRange, ZeroNormVector

# Pairwise sweeps run in row blocks of this many points: small enough that a
# block row of the distance matrix stays cache-resident even for ~16K active
# points, which is what keeps the quadratic passes memory-friendly.
DEFAULT_CHUNK = 64


def cosine_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine distance 1 - a.b / (|a||b|), in [0, 2]."""
    a = np.asarray(a, dtype=np.float64).reshape(-1)
    b = np.asarray(b, dtype=np.float64).reshape(-1)
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatch("<adhoc>", a.shape[0], b.shape[0])
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise ZeroNormVector()
    return float(1.0 - np.dot(a / na, b / nb))


def distances_to_row(unit: np.ndarray, row: np.ndarray) -> np.ndarray:
    """Cosine distances from one unit vector to every row of a unit matrix."""
    return 1.0 - unit @ row


def region_query(dataset: Dataset, index: int, eps: float) -> set[int]:
    """Indices of all records within cosine distance eps of `index` (self included)."""
    n = len(dataset)
    if not 0 <= index < n:
        raise IndexOutOfRange(f"index {index} outside [0, {n})")
    dist = distances_to_row(dataset.unit_matrix, dataset.unit_matrix[index])
    dist[index] = 0.0  # self-distance is exactly 0; don't let rounding exclude it
    return set(np.flatnonzero(dist <= eps).tolist())


def neighbor_index(
    unit: np.ndarray,
    eps: float,
    chunk: int = DEFAULT_CHUNK,
    max_cached_entries: int = 50_000_000,
) -> tuple[np.ndarray, list[np.ndarray] | None]:
    """Blocked pass over all pairs: neighborhood sizes plus, memory
    permitting, the neighbor lists themselves.

    Returns (counts, lists); lists is None when the total neighbor count
    exceeds `max_cached_entries`, in which case callers must recompute rows
    on demand.
    """
    n = unit.shape[0]
    counts = np.empty(n, dtype=np.int64)
    lists: list[np.ndarray] | None = []
    cached = 0
    for start in range(0, n, chunk):
        stop = min(start + chunk, n)
        dist = 1.0 - unit[start:stop] @ unit.T
        dist[np.arange(stop - start), np.arange(start, stop)] = 0.0
        within = dist <= eps
        counts[start:stop] = within.sum(axis=1)
        if lists is not None:
            cached += int(counts[start:stop].sum())
            if cached > max_cached_entries:
                lists = None
            else:
                lists.extend(np.flatnonzero(within[r]) for r in range(stop - start))
    return counts, lists
