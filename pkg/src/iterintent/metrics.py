"""Clustering evaluation against gold intent labels.

Noise policy: by default every noise point (-1) is scored as its own
singleton cluster, so coverage loss is visible in NMI/ARI/ACC/PRF instead
of being silently dropped. Pass noise="drop" to exclude noise points and
compare with tools that do. The -1 sentinel is special only in predicted
labels; gold labels are opaque.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Hashable, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .core import NOISE, ClusterAssignment
from .errors import EmptyInput, LengthMismatch

Labels = Sequence[Hashable]

_NOISE_POLICIES = ("singletons", "drop")


def _checked(gold: Labels, predicted: Labels) -> tuple[list, list]:
    if len(gold) != len(predicted):
        raise LengthMismatch(
            f"gold has {len(gold)} labels, predicted has {len(predicted)}"
        )
    if len(gold) == 0:
        raise EmptyInput("label lists are empty")
    return list(gold), list(predicted)


def _apply_noise_policy(gold: list, predicted: list, noise: str) -> tuple[list, list]:
    if noise not in _NOISE_POLICIES:
        raise ValueError(f"noise policy must be one of {_NOISE_POLICIES}")
    if noise == "drop":
        kept = [(g, p) for g, p in zip(gold, predicted) if p != NOISE]
        if not kept:
            raise EmptyInput("all points are noise under noise='drop'")
        return [g for g, _ in kept], [p for _, p in kept]
    out = [p if p != NOISE else ("noise", i) for i, p in enumerate(predicted)]
    return gold, out


@dataclass(frozen=True)
class ContingencyTable:
    """Counts n_ij of (gold class i, predicted cluster j) co-occurrences.

    Rows follow sorted gold-class order (ties elsewhere break toward the
    smallest class); columns follow first appearance of each cluster.
    """

    counts: np.ndarray
    row_values: tuple
    col_values: tuple

    @classmethod
    def from_labels(cls, gold: Labels, predicted: Labels) -> "ContingencyTable":
        gold, predicted = _checked(gold, predicted)
        rows = sorted(set(gold))
        cols = list(dict.fromkeys(predicted))
        row_of = {v: i for i, v in enumerate(rows)}
        col_of = {v: j for j, v in enumerate(cols)}
        counts = np.zeros((len(rows), len(cols)), dtype=np.int64)
        for g, p in zip(gold, predicted):
            counts[row_of[g], col_of[p]] += 1
        return cls(counts=counts, row_values=tuple(rows), col_values=tuple(cols))

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @property
    def row_sums(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def col_sums(self) -> np.ndarray:
        return self.counts.sum(axis=0)


def _entropy(sums: np.ndarray, n: int) -> float:
    p = sums[sums > 0] / n
    return float(-(p * np.log(p)).sum())


def _mutual_information(table: ContingencyTable) -> float:
    n = table.n
    a = table.row_sums
    b = table.col_sums
    total = 0.0
    rows, cols = np.nonzero(table.counts)
    for i, j in zip(rows.tolist(), cols.tolist()):
        nij = table.counts[i, j]
        total += (nij / n) * np.log(n * nij / (a[i] * b[j]))
    return float(total)


def nmi(gold: Labels, predicted: Labels, noise: str = "singletons") -> float:
    """Normalized mutual information 2*I(Y;C) / (H(Y)+H(C)), in [0, 1]."""
    gold, predicted = _apply_noise_policy(*_checked(gold, predicted), noise)
    table = ContingencyTable.from_labels(gold, predicted)
    hy = _entropy(table.row_sums, table.n)
    hc = _entropy(table.col_sums, table.n)
    if hy + hc == 0.0:
        return 1.0  # both partitions constant, hence identical
    value = 2.0 * _mutual_information(table) / (hy + hc)
    return float(min(max(value, 0.0), 1.0))


def _pairs(x: int) -> int:
    return x * (x - 1) // 2


def _same_partition(gold: list, predicted: list) -> bool:
    def canon(labels: list) -> list[int]:
        seen: dict = {}
        return [seen.setdefault(v, len(seen)) for v in labels]

    return canon(gold) == canon(predicted)


def ari(gold: Labels, predicted: Labels, noise: str = "singletons") -> float:
    """Adjusted Rand index via pair counting; 1 for identical partitions,
    about 0 for independent ones, can be negative.

    When the adjustment denominator vanishes (both partitions all-singleton
    or both single-cluster) the value is 1.0 for identical partitions and
    0.0 otherwise.
    """
    gold, predicted = _apply_noise_policy(*_checked(gold, predicted), noise)
    table = ContingencyTable.from_labels(gold, predicted)
    n = table.n
    sum_ij = int(sum(_pairs(int(v)) for v in table.counts.flat))
    sum_a = int(sum(_pairs(int(v)) for v in table.row_sums))
    sum_b = int(sum(_pairs(int(v)) for v in table.col_sums))
    total_pairs = _pairs(n)

    if total_pairs == 0:
        return 1.0  # single point: trivially identical partitions

    numerator = 2 * (sum_ij * total_pairs - sum_a * sum_b)
    denominator = (sum_a + sum_b) * total_pairs - 2 * sum_a * sum_b
    if denominator == 0:
        return 1.0 if _same_partition(gold, predicted) else 0.0
    return numerator / denominator


def clustering_accuracy(
    gold: Labels, predicted: Labels, noise: str = "singletons"
) -> float:
    """Best one-to-one cluster-to-class matching fraction, via the Hungarian
    solver on the contingency table."""
    gold, predicted = _apply_noise_policy(*_checked(gold, predicted), noise)
    table = ContingencyTable.from_labels(gold, predicted)
    rows, cols = linear_sum_assignment(table.counts, maximize=True)
    return float(table.counts[rows, cols].sum() / table.n)


def cluster_prf(
    gold: Labels, predicted: Labels, noise: str = "singletons"
) -> tuple[float, float, float]:
    """Majority-mapping precision, recall, and their harmonic mean.

    Each predicted cluster is credited with its plurality gold class
    (precision); each gold class with its best-covering cluster (recall).
    """
    gold, predicted = _apply_noise_policy(*_checked(gold, predicted), noise)
    table = ContingencyTable.from_labels(gold, predicted)
    n = table.n
    precision = float(table.counts.max(axis=0).sum() / n)
    recall = float(table.counts.max(axis=1).sum() / n)
    f1 = 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)
    return precision, recall, f1


def intents_found(gold: Labels, predicted: Labels) -> int:
    """Distinct gold classes that are the plurality class of at least one
    non-noise cluster. Plurality ties break toward the smallest gold class."""
    gold, predicted = _checked(gold, predicted)
    kept = [(g, p) for g, p in zip(gold, predicted) if p != NOISE]
    if not kept:
        return 0
    table = ContingencyTable.from_labels([g for g, _ in kept], [p for _, p in kept])
    majority_rows = table.counts.argmax(axis=0)  # argmax takes the first (smallest) row on ties
    return len(set(majority_rows.tolist()))


@dataclass(frozen=True)
class EvalReport:
    nmi: float
    ari: float
    acc: float
    precision: float
    recall: float
    f1: float
    intents_total: int
    intents_found: int
    num_clusters: int
    noise_fraction: float

    @classmethod
    def field_names(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in self.field_names()}


def evaluate(
    gold: Labels,
    predicted: Labels | ClusterAssignment,
    noise: str = "singletons",
) -> EvalReport:
    """Full report for a predicted clustering against gold intents."""
    if isinstance(predicted, ClusterAssignment):
        predicted = predicted.labels.tolist()
    gold, predicted = _checked(gold, predicted)
    noise_points = sum(1 for p in predicted if p == NOISE)
    precision, recall, f1 = cluster_prf(gold, predicted, noise=noise)
    return EvalReport(
        nmi=nmi(gold, predicted, noise=noise),
        ari=ari(gold, predicted, noise=noise),
        acc=clustering_accuracy(gold, predicted, noise=noise),
        precision=precision,
        recall=recall,
        f1=f1,
        intents_total=len(set(gold)),
        intents_found=intents_found(gold, predicted),
        num_clusters=len({p for p in predicted if p != NOISE}),
        noise_fraction=noise_points / len(predicted),
    )
