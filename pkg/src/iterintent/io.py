"""Dataset ingestion, result persistence, and run manifests.

Datasets are JSONL (one record per line) because embedding vectors do not
survive CSV cleanly; CSV is reserved for label and report tables. Embedding
numbers are parsed as 64-bit floats.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

import numpy as np

from .core import ClusterAssignment, Dataset, UtteranceRecord, normalize_assignment, validate_dataset
from .errors import ParseError
from .iterdbscan import IterationRound, IterationTrace


def read_jsonl(path: str | Path) -> Dataset:
    """Load a dataset: one JSON object per line with keys
    id (str), text (str), embedding (list of numbers), label (optional str)."""
    records: list[UtteranceRecord] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(lineno, f"invalid JSON: {exc.msg}") from exc
            if not isinstance(obj, dict):
                raise ParseError(lineno, "expected a JSON object")
            for key, types in (("id", str), ("text", str), ("embedding", list)):
                if key not in obj:
                    raise ParseError(lineno, f"missing key {key!r}")
                if not isinstance(obj[key], types):
                    raise ParseError(lineno, f"key {key!r} has wrong type")
            if not all(isinstance(v, (int, float)) and not isinstance(v, bool)
                       for v in obj["embedding"]):
                raise ParseError(lineno, "embedding must contain only numbers")
            label = obj.get("label")
            if label is not None and not isinstance(label, str):
                raise ParseError(lineno, "label must be a string or null")
            records.append(UtteranceRecord(
                id=obj["id"],
                text=obj["text"],
                embedding=np.asarray(obj["embedding"], dtype=np.float64),
                gold_label=label,
            ))
    return validate_dataset(records)


def _trace_to_dict(trace: IterationTrace, partition: int) -> dict:
    return {
        "partition": partition,
        "rounds": [asdict(r) for r in trace.rounds],
    }


def trace_sidecar_path(path: str | Path) -> Path:
    return Path(str(path) + ".trace.json")


def write_assignment(
    path: str | Path,
    dataset: Dataset,
    assignment: ClusterAssignment,
    traces: Sequence[IterationTrace] | IterationTrace | None = None,
) -> None:
    """Persist an assignment as JSONL of {id, cluster} plus a sidecar JSON
    trace file with the per-iteration schedule of every partition."""
    with open(path, "w", encoding="utf-8") as fh:
        for record, cluster in zip(dataset.records, assignment.labels.tolist()):
            fh.write(json.dumps({"id": record.id, "cluster": cluster}) + "\n")
    if traces is None:
        return
    if isinstance(traces, IterationTrace):
        traces = [traces]
    payload = {"partitions": [_trace_to_dict(t, i) for i, t in enumerate(traces)]}
    with open(trace_sidecar_path(path), "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def read_assignment(path: str | Path, dataset: Dataset) -> ClusterAssignment:
    """Load an assignment written by write_assignment, reordered to match
    the dataset's record order."""
    by_id: dict[str, int] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(lineno, f"invalid JSON: {exc.msg}") from exc
            if not isinstance(obj, dict) or "id" not in obj or "cluster" not in obj:
                raise ParseError(lineno, "expected {id, cluster}")
            if not isinstance(obj["cluster"], int) or isinstance(obj["cluster"], bool):
                raise ParseError(lineno, "cluster must be an integer")
            if obj["id"] in by_id:
                raise ParseError(lineno, f"duplicate id {obj['id']!r}")
            by_id[obj["id"]] = obj["cluster"]
    labels = []
    for record in dataset.records:
        if record.id not in by_id:
            raise ParseError(0, f"assignment has no entry for record {record.id!r}")
        labels.append(by_id[record.id])
    if len(by_id) != len(dataset):
        extra = set(by_id) - {r.id for r in dataset.records}
        raise ParseError(0, f"assignment has entries for unknown ids: {sorted(extra)[:3]}")
    return normalize_assignment(labels)


def read_trace(path: str | Path) -> list[IterationTrace]:
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    traces = []
    for part in payload["partitions"]:
        rounds = tuple(IterationRound(**r) for r in part["rounds"])
        traces.append(IterationTrace(rounds=rounds))
    return traces


def file_sha256(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


@dataclass(frozen=True)
class RunManifest:
    command: str
    dataset_path: str
    dataset_sha256: str
    params: dict
    seed: int | None
    started_at: str
    finished_at: str
    outputs: list[str]
    version: str

    def to_dict(self) -> dict:
        return asdict(self)


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat()


def write_manifest(path: str | Path, manifest: RunManifest) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest.to_dict(), fh, indent=2)
        fh.write("\n")


def read_manifest(path: str | Path) -> RunManifest:
    with open(path, "r", encoding="utf-8") as fh:
        return RunManifest(**json.load(fh))
