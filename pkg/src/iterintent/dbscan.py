"""DBSCAN over a dataset, restricted to an active subset of records.

Serves both as the single-shot baseline and as the inner step of the
iterative relaxation loop. Cluster expansion scans seed points in ascending
record-index order, so border points deterministically join the first
cluster that reaches them.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .core import NOISE, ClusterAssignment, Dataset, normalize_assignment
from .errors import EmptyActiveSet, IndexOutOfRange, InvalidParams
from .neighbors import neighbor_index

_EXPANSION_BATCH = 256


def _expand_clusters(
    core: np.ndarray,
    batch_neighbors: Callable[[list[int]], list[np.ndarray]],
) -> np.ndarray:
    """Grow clusters from core seeds in ascending index order.

    The BFS frontier is drained in batches so neighbor rows can be computed
    as one matrix product; batching does not change the outcome because all
    points expanded within one seed's loop receive the same cluster id.
    """
    m = core.shape[0]
    local = np.full(m, NOISE, dtype=np.int64)
    cluster_id = 0
    for seed in range(m):
        if not core[seed] or local[seed] != NOISE:
            continue
        local[seed] = cluster_id
        queue: deque[int] = deque([seed])
        while queue:
            batch = [queue.popleft() for _ in range(min(len(queue), _EXPANSION_BATCH))]
            for nbrs in batch_neighbors(batch):
                fresh = nbrs[local[nbrs] == NOISE]
                local[fresh] = cluster_id
                queue.extend(fresh[core[fresh]].tolist())
        cluster_id += 1
    return local


@dataclass(frozen=True)
class DbscanParams:
    """eps is the maximum cosine distance between neighbors; min_pts the
    self-inclusive neighborhood size that qualifies a core point."""

    eps: float
    min_pts: int
    min_cluster_size: int = 3

    def __post_init__(self) -> None:
        if self.eps < 0:
            raise InvalidParams(f"eps must be >= 0, got {self.eps}")
        if self.min_pts < 1:
            raise InvalidParams(f"min_pts must be >= 1, got {self.min_pts}")
        if self.min_cluster_size < 1:
            raise InvalidParams(
                f"min_cluster_size must be >= 1, got {self.min_cluster_size}"
            )


def run_dbscan(
    dataset: Dataset,
    active: Iterable[int],
    params: DbscanParams,
) -> ClusterAssignment:
    """Cluster the active records; everything else stays NOISE.

    A point is core iff its eps-neighborhood within the active set (itself
    included) has at least min_pts members. Clusters smaller than
    min_cluster_size are demoted to NOISE afterwards. Labels are returned
    for the full dataset, normalized to contiguous ids.
    """
    active_idx = np.unique(np.fromiter(active, dtype=np.int64))
    if active_idx.size == 0:
        raise EmptyActiveSet("active set is empty")
    if active_idx[0] < 0 or active_idx[-1] >= len(dataset):
        raise IndexOutOfRange(
            f"active indices must lie in [0, {len(dataset)})"
        )

    unit = dataset.unit_matrix[active_idx]
    counts, lists = neighbor_index(unit, params.eps)

    if lists is not None:
        cached = lists

        def batch_neighbors(batch: list[int]) -> list[np.ndarray]:
            return [cached[p] for p in batch]

    else:

        def batch_neighbors(batch: list[int]) -> list[np.ndarray]:
            dist = 1.0 - unit[batch] @ unit.T
            dist[np.arange(len(batch)), batch] = 0.0
            return [np.flatnonzero(dist[r] <= params.eps)
                    for r in range(len(batch))]

    local = _expand_clusters(counts >= params.min_pts, batch_neighbors)

    # Post-pass: clusters below the minimum size revert to noise.
    found = int(local.max()) + 1
    if found:
        sizes = np.bincount(local[local != NOISE], minlength=found)
        for cid in np.flatnonzero(sizes < params.min_cluster_size):
            local[local == cid] = NOISE

    full = np.full(len(dataset), NOISE, dtype=np.int64)
    full[active_idx] = local
    return normalize_assignment(full)
