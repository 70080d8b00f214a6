"""Iterative density relaxation: repeated DBSCAN rounds from high- to
low-density regions.

Each round clusters only the points still marked as noise, then relaxes the
density definition: the distance threshold grows by delta_min_distance and
the neighborhood size requirement shrinks by delta_number_of_points. The
loop stops when the neighborhood requirement reaches the min_points floor
(checked before running a round) or after max_iteration rounds. Points
clustered in an earlier round are frozen and never revisited, which is what
lets low-frequency groups surface without dissolving dense ones.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import NOISE, ClusterAssignment, Dataset, normalize_assignment
from .dbscan import DbscanParams, run_dbscan
from .errors import EmptyDataset, InvalidParams


@dataclass(frozen=True)
class IterDbscanParams:
    initial_min_distance: float
    initial_number_of_points: int
    delta_min_distance: float = 0.01
    delta_number_of_points: int = 1
    min_points: int = 3
    max_iteration: int = 10
    min_cluster_size: int = 3

    def __post_init__(self) -> None:
        if self.initial_min_distance < 0:
            raise InvalidParams("initial_min_distance must be >= 0")
        if self.min_points < 1:
            raise InvalidParams("min_points must be >= 1")
        if self.initial_number_of_points < self.min_points:
            raise InvalidParams(
                "initial_number_of_points must be >= min_points "
                f"({self.initial_number_of_points} < {self.min_points})"
            )
        if self.delta_min_distance < 0:
            raise InvalidParams("delta_min_distance must be >= 0")
        if self.delta_number_of_points < 0:
            raise InvalidParams("delta_number_of_points must be >= 0")
        if self.max_iteration < 1:
            raise InvalidParams("max_iteration must be >= 1")
        if self.min_cluster_size < 1:
            raise InvalidParams("min_cluster_size must be >= 1")

    def schedule(self, iteration: int) -> tuple[float, int]:
        """(eps, min_pts) in effect at a 1-based iteration number.

        eps = initial + (i-1) * delta; min_pts decreases by the same rule
        but never drops below the min_points floor.
        """
        eps = self.initial_min_distance + (iteration - 1) * self.delta_min_distance
        pts = max(
            self.initial_number_of_points
            - (iteration - 1) * self.delta_number_of_points,
            self.min_points,
        )
        return eps, pts


@dataclass(frozen=True)
class IterationRound:
    iteration: int
    eps: float
    min_pts: int
    clusters_found: int
    noise_remaining: int


@dataclass(frozen=True)
class IterationTrace:
    rounds: tuple[IterationRound, ...]

    def __len__(self) -> int:
        return len(self.rounds)

    def __iter__(self):
        return iter(self.rounds)


def run_iter_dbscan(
    dataset: Dataset,
    params: IterDbscanParams,
) -> tuple[ClusterAssignment, IterationTrace]:
    """Run the relaxation loop over the whole dataset.

    Cluster ids from later rounds are offset to stay globally unique, then
    the final labeling is normalized. Residual noise keeps the -1 sentinel.
    """
    if len(dataset) == 0:
        raise EmptyDataset("cannot cluster an empty dataset")

    labels = np.full(len(dataset), NOISE, dtype=np.int64)
    active = np.arange(len(dataset), dtype=np.int64)
    rounds: list[IterationRound] = []
    next_offset = 0

    iteration = 1
    while iteration <= params.max_iteration:
        eps, min_pts = params.schedule(iteration)
        if min_pts == params.min_points:
            break  # floor reached: checked before the round runs
        sub = run_dbscan(
            dataset,
            active,
            DbscanParams(eps=eps, min_pts=min_pts,
                         min_cluster_size=params.min_cluster_size),
        )
        newly = sub.labels != NOISE
        labels[newly] = sub.labels[newly] + next_offset
        next_offset += sub.num_clusters
        active = np.flatnonzero(labels == NOISE)
        rounds.append(IterationRound(
            iteration=iteration,
            eps=eps,
            min_pts=min_pts,
            clusters_found=sub.num_clusters,
            noise_remaining=int(active.size),
        ))
        if active.size == 0:
            break  # nothing left to relax towards
        iteration += 1

    return normalize_assignment(labels), IterationTrace(rounds=tuple(rounds))


def default_grid() -> list[IterDbscanParams]:
    """The standard evaluation grid: 5 initial distances x 6 max_iteration
    values (10..15) x 16 initial neighborhood sizes (10..25), other knobs
    fixed (delta distance 0.01, delta points 1, floor 3, min cluster size 3).
    480 configurations in deterministic order.
    """
    grid: list[IterDbscanParams] = []
    for dist in (0.09, 0.12, 0.15, 0.20, 0.30):
        for max_iteration in range(10, 16):
            for pts in range(10, 26):
                grid.append(IterDbscanParams(
                    initial_min_distance=dist,
                    initial_number_of_points=pts,
                    delta_min_distance=0.01,
                    delta_number_of_points=1,
                    min_points=3,
                    max_iteration=max_iteration,
                    min_cluster_size=3,
                ))
    return grid
