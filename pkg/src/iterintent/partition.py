"""Scaling scheme for large datasets: K-Means pre-partitioning plus
per-partition clustering in parallel.

Clusters never span partitions; that is the accepted trade-off for keeping
per-run cost bounded. Results are a pure function of (dataset, params,
threshold, seed): worker count and scheduling cannot change them.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import NOISE, ClusterAssignment, Dataset, normalize_assignment
from .errors import KTooLarge
from .iterdbscan import IterationTrace, IterDbscanParams, run_iter_dbscan

DEFAULT_PARTITION_THRESHOLD = 10_000
_MAX_LLOYD_ROUNDS = 100


def partition_count(n: int) -> int:
    """Number of K-Means cells for a dataset of size n: max(ceil(n/10000), 3)."""
    return max(math.ceil(n / 10_000), 3)


@dataclass(frozen=True)
class PartitionPlan:
    """Per-record partition index in [0, k); every partition is non-empty."""

    k: int
    assignment: np.ndarray

    def __post_init__(self) -> None:
        assignment = np.asarray(self.assignment, dtype=np.int64)
        assignment.flags.writeable = False
        object.__setattr__(self, "assignment", assignment)

    def members_of(self, partition: int) -> np.ndarray:
        return np.flatnonzero(self.assignment == partition)


def kmeans(dataset: Dataset, k: int, seed: int) -> PartitionPlan:
    """Spherical K-Means (cosine distance on unit vectors) with seeded
    k-means++ style initialization and at most 100 Lloyd rounds.

    Empty cells are dropped and the remaining cells reindexed, so the plan
    may end up with fewer than k partitions.
    """
    n = len(dataset)
    if k > n:
        raise KTooLarge(f"k={k} exceeds dataset size {n}")
    unit = dataset.unit_matrix
    rng = np.random.default_rng(seed)

    centers = np.empty((k, dataset.dimension), dtype=np.float64)
    centers[0] = unit[int(rng.integers(n))]
    if k > 1:
        best = 1.0 - unit @ centers[0]
        for c in range(1, k):
            weights = np.maximum(best, 0.0) ** 2
            total = weights.sum()
            if total > 0:
                pick = int(rng.choice(n, p=weights / total))
            else:
                pick = int(rng.integers(n))
            centers[c] = unit[pick]
            best = np.minimum(best, 1.0 - unit @ centers[c])

    assign = np.full(n, -1, dtype=np.int64)
    for _ in range(_MAX_LLOYD_ROUNDS):
        new_assign = np.argmax(unit @ centers.T, axis=1)
        if np.array_equal(new_assign, assign):
            break
        assign = new_assign
        for c in range(k):
            members = unit[assign == c]
            if members.shape[0] == 0:
                continue  # keep the previous center for an empty cell
            mean = members.mean(axis=0)
            norm = np.linalg.norm(mean)
            if norm > 0:
                centers[c] = mean / norm

    used = np.unique(assign)
    remap = {int(old): new for new, old in enumerate(used.tolist())}
    final = np.fromiter((remap[int(a)] for a in assign), dtype=np.int64, count=n)
    return PartitionPlan(k=len(used), assignment=final)


def _run_cell(
    cell: tuple[Dataset, IterDbscanParams],
) -> tuple[ClusterAssignment, IterationTrace]:
    return run_iter_dbscan(cell[0], cell[1])


def cluster_partitioned(
    dataset: Dataset,
    params: IterDbscanParams,
    threshold: int = DEFAULT_PARTITION_THRESHOLD,
    parallelism: int = 1,
    seed: int = 0,
) -> tuple[ClusterAssignment, list[IterationTrace]]:
    """Iterative clustering, partitioned when the dataset exceeds `threshold`.

    At or below the threshold this is exactly run_iter_dbscan (one trace).
    Above it, the dataset is split into partition_count(n) K-Means cells and
    each cell is clustered independently; per-cell cluster ids are offset to
    global uniqueness and the merged labeling normalized.
    """
    n = len(dataset)
    if n <= threshold:
        assignment, trace = run_iter_dbscan(dataset, params)
        return assignment, [trace]

    plan = kmeans(dataset, partition_count(n), seed)
    part_indices = [plan.members_of(p) for p in range(plan.k)]
    cells = [(dataset.subset(idx), params) for idx in part_indices]

    if parallelism <= 1:
        results = [_run_cell(cell) for cell in cells]
    else:
        # Worker processes, not threads: the per-cell work is partly
        # GIL-bound numpy. Results are collected in partition order, so the
        # pool cannot influence the outcome.
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            results = list(pool.map(_run_cell, cells))

    labels = np.full(n, NOISE, dtype=np.int64)
    traces: list[IterationTrace] = []
    offset = 0
    for indices, (sub, trace) in zip(part_indices, results):
        clustered = sub.labels != NOISE
        labels[indices[clustered]] = sub.labels[clustered] + offset
        offset += sub.num_clusters
        traces.append(trace)

    return normalize_assignment(labels), traces
