"""Extend human-assigned cluster intents to unclustered utterances.

A multinomial logistic regression is trained on the cluster-labeled subset
(embeddings as features) and its argmax intent is propagated to each
unlabeled record whose top softmax probability clears a confidence cutoff.
Cluster-sourced labels are never touched by propagation.
"""

from __future__ import annotations

import csv
import json
import warnings
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Literal, Mapping

import numpy as np

from .core import ClusterAssignment, Dataset, NOISE
from .errors import DidNotConverge, TooFewClasses

DEFAULT_CONFIDENCE_THRESHOLD = 0.7

Source = Literal["cluster", "propagated"]


@dataclass(frozen=True)
class UtteranceLabel:
    intent: str
    confidence: float
    source: Source


@dataclass(frozen=True)
class LabelState:
    """Human cluster labels plus the per-record labels derived from them."""

    cluster_labels: dict[int, str] = field(default_factory=dict)
    utterance_labels: tuple[UtteranceLabel | None, ...] = ()

    def labeled_indices(self, source: Source | None = None) -> list[int]:
        return [
            i for i, u in enumerate(self.utterance_labels)
            if u is not None and (source is None or u.source == source)
        ]

    def unlabeled_indices(self) -> list[int]:
        return [i for i, u in enumerate(self.utterance_labels) if u is None]


def label_state_from_clusters(
    assignment: ClusterAssignment,
    cluster_labels: Mapping[int, str],
) -> LabelState:
    """Seed a LabelState: members of every labeled cluster get that intent
    with confidence 1.0 and source="cluster"."""
    per_record: list[UtteranceLabel | None] = [None] * len(assignment)
    for i, cid in enumerate(assignment.labels.tolist()):
        if cid != NOISE and cid in cluster_labels:
            per_record[i] = UtteranceLabel(cluster_labels[cid], 1.0, "cluster")
    return LabelState(
        cluster_labels=dict(cluster_labels),
        utterance_labels=tuple(per_record),
    )


@dataclass(frozen=True)
class TrainingConfig:
    seed: int
    learning_rate: float = 0.1
    epochs: int = 500
    l2: float = 1e-3


@dataclass(frozen=True)
class IntentClassifier:
    """Multinomial logistic regression: weights (num_intents, dim) + bias."""

    weights: np.ndarray
    bias: np.ndarray
    intents: tuple[str, ...]
    converged: bool
    final_grad_norm: float
    loss_history: tuple[float, ...]

    def predict_proba(self, matrix: np.ndarray) -> np.ndarray:
        """Softmax probabilities, one row per input row; rows sum to 1."""
        logits = matrix @ self.weights.T + self.bias
        logits -= logits.max(axis=1, keepdims=True)
        expd = np.exp(logits)
        return expd / expd.sum(axis=1, keepdims=True)


def train_classifier(
    dataset: Dataset,
    labels: Mapping[int, str],
    config: TrainingConfig,
) -> IntentClassifier:
    """Fit the classifier on the labeled record subset by full-batch gradient
    descent with L2 regularization. Deterministic given config.seed.

    The loss is recorded every epoch. If it ever increases (step too large),
    a DidNotConverge warning is emitted with diagnostics; the model is still
    returned.
    """
    indices = sorted(labels)
    intents = tuple(sorted(set(labels.values())))
    if len(intents) < 2:
        raise TooFewClasses(
            f"need >= 2 distinct intents to train, got {len(intents)}"
        )
    intent_of = {name: k for k, name in enumerate(intents)}

    x = dataset.matrix[indices]
    y = np.array([intent_of[labels[i]] for i in indices], dtype=np.int64)
    m, dim = x.shape
    k = len(intents)
    onehot = np.zeros((m, k), dtype=np.float64)
    onehot[np.arange(m), y] = 1.0

    rng = np.random.default_rng(config.seed)
    weights = rng.normal(0.0, 0.01, size=(k, dim))
    bias = np.zeros(k, dtype=np.float64)

    losses: list[float] = []
    grad_norm = np.inf
    for _ in range(config.epochs):
        logits = x @ weights.T + bias
        logits -= logits.max(axis=1, keepdims=True)
        expd = np.exp(logits)
        probs = expd / expd.sum(axis=1, keepdims=True)

        ce = -np.log(probs[np.arange(m), y]).mean()
        losses.append(float(ce + 0.5 * config.l2 * np.sum(weights**2)))

        err = (probs - onehot) / m
        grad_w = err.T @ x + config.l2 * weights
        grad_b = err.sum(axis=0)
        grad_norm = float(np.sqrt(np.sum(grad_w**2) + np.sum(grad_b**2)))
        weights -= config.learning_rate * grad_w
        bias -= config.learning_rate * grad_b

    monotone = all(b <= a + 1e-12 for a, b in zip(losses, losses[1:]))
    if not monotone:
        worst = max(b - a for a, b in zip(losses, losses[1:]))
        warnings.warn(
            f"training loss increased by up to {worst:.3g} between epochs; "
            f"final gradient norm {grad_norm:.3g}. Consider a smaller "
            f"learning rate than {config.learning_rate}.",
            DidNotConverge,
        )
    return IntentClassifier(
        weights=weights,
        bias=bias,
        intents=intents,
        converged=monotone,
        final_grad_norm=grad_norm,
        loss_history=tuple(losses),
    )


def propagate_labels(
    classifier: IntentClassifier,
    dataset: Dataset,
    state: LabelState,
    threshold: float = DEFAULT_CONFIDENCE_THRESHOLD,
) -> LabelState:
    """Assign the classifier's argmax intent to every unlabeled record whose
    top probability reaches `threshold`. Existing labels are preserved."""
    per_record = list(state.utterance_labels)
    todo = [i for i, u in enumerate(per_record) if u is None]
    if todo:
        probs = classifier.predict_proba(dataset.matrix[todo])
        best = probs.argmax(axis=1)
        for row, i in enumerate(todo):
            confidence = float(probs[row, best[row]])
            if confidence >= threshold:
                per_record[i] = UtteranceLabel(
                    classifier.intents[int(best[row])], confidence, "propagated"
                )
    return replace(state, utterance_labels=tuple(per_record))


@dataclass(frozen=True)
class CorpusRow:
    id: str
    text: str
    intent: str
    confidence: float
    source: Source


@dataclass(frozen=True)
class ExportedCorpus:
    labeled: tuple[CorpusRow, ...]
    unlabeled: tuple[tuple[str, str], ...]  # (id, text)


def export_training_data(dataset: Dataset, state: LabelState) -> ExportedCorpus:
    """Split the dataset into intent-labeled training rows and the leftover
    unlabeled records."""
    labeled: list[CorpusRow] = []
    unlabeled: list[tuple[str, str]] = []
    for record, label in zip(dataset.records, state.utterance_labels):
        if label is None:
            unlabeled.append((record.id, record.text))
        else:
            labeled.append(CorpusRow(
                id=record.id,
                text=record.text,
                intent=label.intent,
                confidence=label.confidence,
                source=label.source,
            ))
    return ExportedCorpus(labeled=tuple(labeled), unlabeled=tuple(unlabeled))


def write_corpus_jsonl(corpus: ExportedCorpus, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in corpus.labeled:
            fh.write(json.dumps({
                "id": row.id,
                "text": row.text,
                "intent": row.intent,
                "confidence": row.confidence,
                "source": row.source,
            }) + "\n")


def write_corpus_csv(corpus: ExportedCorpus, path: str | Path) -> None:
    """Two-column (text, intent) CSV for direct import into bot frameworks."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["text", "intent"])
        for row in corpus.labeled:
            writer.writerow([row.text, row.intent])
