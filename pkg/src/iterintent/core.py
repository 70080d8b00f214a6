"""Domain types: utterance records, the dataset container, and cluster assignments.

All downstream algorithms iterate records in ingestion order, so a dataset is
immutable once validated and runs are reproducible bit-for-bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    DuplicateId,
    EmptyDataset,
    NonFiniteValue,
    ZeroNormVector,
)

NOISE = -1


@dataclass(frozen=True)
class UtteranceRecord:
    """One text item with its embedding vector and optional gold intent."""

    id: str
    text: str
    embedding: np.ndarray
    gold_label: str | None = None

    def __post_init__(self) -> None:
        emb = np.asarray(self.embedding, dtype=np.float64).reshape(-1)
        emb.flags.writeable = False
        object.__setattr__(self, "embedding", emb)


@dataclass(frozen=True)
class Dataset:
    """Ordered, validated collection of records sharing one embedding dimension."""

    records: tuple[UtteranceRecord, ...]
    dimension: int
    _matrix: np.ndarray = field(repr=False, compare=False)
    _unit_matrix: np.ndarray = field(repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def matrix(self) -> np.ndarray:
        """Dense (n, dimension) float64 view of all embeddings, row i = record i."""
        return self._matrix

    @property
    def unit_matrix(self) -> np.ndarray:
        """Row-normalized embedding matrix; rows have unit L2 norm."""
        return self._unit_matrix

    @property
    def ids(self) -> list[str]:
        return [r.id for r in self.records]

    @property
    def gold_labels(self) -> list[str | None]:
        return [r.gold_label for r in self.records]

    def subset(self, indices: Sequence[int]) -> "Dataset":
        """New Dataset over the given record indices, preserving order."""
        idx = list(indices)
        records = tuple(self.records[i] for i in idx)
        matrix = self._matrix[idx]
        unit = self._unit_matrix[idx]
        matrix.flags.writeable = False
        unit.flags.writeable = False
        return Dataset(records=records, dimension=self.dimension,
                       _matrix=matrix, _unit_matrix=unit)


def validate_dataset(records: Iterable[UtteranceRecord]) -> Dataset:
    """Validate records and build a Dataset.

    Rejects an empty record list, mismatched embedding dimensions, non-finite
    embedding components, duplicate ids, and zero-norm embeddings (cosine
    distance would be undefined downstream).
    """
    recs = tuple(records)
    if not recs:
        raise EmptyDataset("dataset must contain at least one record")

    dimension = recs[0].embedding.shape[0]
    seen: set[str] = set()
    for r in recs:
        if r.id in seen:
            raise DuplicateId(r.id)
        seen.add(r.id)
        if r.embedding.shape[0] != dimension:
            raise DimensionMismatch(r.id, dimension, r.embedding.shape[0])
        if not np.all(np.isfinite(r.embedding)):
            raise NonFiniteValue(r.id)

    matrix = np.stack([r.embedding for r in recs]).astype(np.float64)
    norms = np.linalg.norm(matrix, axis=1)
    zero = np.flatnonzero(norms == 0.0)
    if zero.size:
        raise ZeroNormVector(recs[int(zero[0])].id)

    unit = matrix / norms[:, None]
    matrix.flags.writeable = False
    unit.flags.writeable = False
    return Dataset(records=recs, dimension=int(dimension),
                   _matrix=matrix, _unit_matrix=unit)


@dataclass(frozen=True)
class ClusterAssignment:
    """Per-record cluster ids: NOISE (-1) or a contiguous id in [0, num_clusters)."""

    labels: np.ndarray
    num_clusters: int

    def __post_init__(self) -> None:
        labels = np.asarray(self.labels, dtype=np.int64)
        labels.flags.writeable = False
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def noise_count(self) -> int:
        return int(np.sum(self.labels == NOISE))

    @property
    def noise_fraction(self) -> float:
        return self.noise_count / len(self.labels)

    def members_of(self, cluster_id: int) -> np.ndarray:
        """Record indices of one cluster, in record order."""
        return np.flatnonzero(self.labels == cluster_id)

    def cluster_sizes(self) -> dict[int, int]:
        ids, counts = np.unique(self.labels[self.labels != NOISE], return_counts=True)
        return {int(c): int(n) for c, n in zip(ids, counts)}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ClusterAssignment):
            return NotImplemented
        return (self.num_clusters == other.num_clusters
                and np.array_equal(self.labels, other.labels))


def normalize_assignment(raw_labels: Sequence[int] | np.ndarray) -> ClusterAssignment:
    """Canonicalize arbitrary non-negative cluster ids to 0..k-1.

    Ids are remapped by order of first appearance; NOISE (-1) is preserved.
    Idempotent, and preserves the partition structure of the input.
    """
    raw = np.asarray(raw_labels, dtype=np.int64)
    mapping: dict[int, int] = {}
    out = np.full(raw.shape, NOISE, dtype=np.int64)
    for i, label in enumerate(raw.tolist()):
        if label == NOISE:
            continue
        if label not in mapping:
            mapping[label] = len(mapping)
        out[i] = mapping[label]
    return ClusterAssignment(labels=out, num_clusters=len(mapping))
