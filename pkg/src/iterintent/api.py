"""HTTP service for the human labeling step.

One dataset, one session. Reads are lock-free snapshots of immutable data;
mutations (labeling, propagation) are serialized through a single lock and
persisted to disk before the response returns, so a crash loses no labels.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel, Field

from .core import NOISE, ClusterAssignment, Dataset
from .errors import TooFewClasses
from .propagate import (
    DEFAULT_CONFIDENCE_THRESHOLD,
    LabelState,
    TrainingConfig,
    UtteranceLabel,
    export_training_data,
    propagate_labels,
    train_classifier,
)
from .io import utc_now

REPRESENTATIVES_PER_CLUSTER = 3


class SessionStore:
    """In-memory labeling session with optional JSON persistence."""

    def __init__(
        self,
        dataset: Dataset,
        assignment: ClusterAssignment,
        state_path: str | Path | None = None,
        seed: int = 0,
    ):
        self.dataset = dataset
        self.assignment = assignment
        self.seed = seed
        self.state_path = Path(state_path) if state_path else None
        self.cluster_labels: dict[int, str] = {}
        self.propagated: dict[int, UtteranceLabel] = {}
        self.audit: list[dict] = []
        self._lock = threading.Lock()
        if self.state_path and self.state_path.exists():
            self._load()

    # -- persistence -------------------------------------------------------

    def _load(self) -> None:
        with open(self.state_path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
        self.cluster_labels = {int(k): v for k, v in payload["cluster_labels"].items()}
        self.propagated = {
            int(k): UtteranceLabel(v["intent"], v["confidence"], "propagated")
            for k, v in payload["propagated"].items()
        }
        self.audit = payload["audit"]

    def _save(self) -> None:
        if not self.state_path:
            return
        payload = {
            "cluster_labels": {str(k): v for k, v in self.cluster_labels.items()},
            "propagated": {
                str(i): {"intent": u.intent, "confidence": u.confidence}
                for i, u in self.propagated.items()
            },
            "audit": self.audit,
        }
        tmp = self.state_path.with_suffix(self.state_path.suffix + ".tmp")
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(payload, fh)
        tmp.replace(self.state_path)

    # -- derived views -----------------------------------------------------

    def label_state(self) -> LabelState:
        """Per-record labels: cluster-sourced labels always win over
        propagated ones, so relabeling a cluster takes effect immediately."""
        per_record: list[UtteranceLabel | None] = []
        for i, cid in enumerate(self.assignment.labels.tolist()):
            if cid != NOISE and cid in self.cluster_labels:
                per_record.append(UtteranceLabel(self.cluster_labels[cid], 1.0, "cluster"))
            else:
                per_record.append(self.propagated.get(i))
        return LabelState(
            cluster_labels=dict(self.cluster_labels),
            utterance_labels=tuple(per_record),
        )

    def cluster_summary(self, cid: int) -> dict:
        members = self.assignment.members_of(cid)
        return {
            "id": cid,
            "size": int(members.size),
            "label": self.cluster_labels.get(cid),
            "representatives": self._representatives(members),
        }

    def _representatives(self, members: np.ndarray) -> list[str]:
        centroid = self.dataset.matrix[members].mean(axis=0)
        norm = np.linalg.norm(centroid)
        if norm == 0.0:
            nearest = members[:REPRESENTATIVES_PER_CLUSTER]
        else:
            dist = 1.0 - self.dataset.unit_matrix[members] @ (centroid / norm)
            order = np.argsort(dist, kind="stable")
            nearest = members[order[:REPRESENTATIVES_PER_CLUSTER]]
        return [self.dataset.records[int(i)].text for i in nearest]

    def summaries(self) -> list[dict]:
        out = [self.cluster_summary(cid) for cid in range(self.assignment.num_clusters)]
        out.sort(key=lambda s: (-s["size"], s["id"]))
        return out

    def progress(self) -> dict:
        state = self.label_state()
        labeled = len(state.labeled_indices("cluster"))
        propagated = len(state.labeled_indices("propagated"))
        total = len(self.dataset)
        return {
            "total": total,
            "clustered": total - self.assignment.noise_count,
            "labeled": labeled,
            "propagated": propagated,
            "unlabeled": total - labeled - propagated,
        }

    # -- mutations ---------------------------------------------------------

    def label_cluster(self, cid: int, intent: str) -> dict:
        with self._lock:
            self.cluster_labels[cid] = intent
            self.audit.append({
                "ts": utc_now(), "action": "label", "cluster": cid, "intent": intent,
            })
            self._save()
            return self.cluster_summary(cid)

    def run_propagation(self, threshold: float) -> dict:
        with self._lock:
            base = self.label_state()
            train_on = {
                i: base.utterance_labels[i].intent
                for i in base.labeled_indices("cluster")
            }
            classifier = train_classifier(
                self.dataset, train_on, TrainingConfig(seed=self.seed)
            )
            # Propagation restarts from the cluster-labeled base every time,
            # so a later call with a higher threshold shrinks the set.
            fresh = LabelState(
                cluster_labels=base.cluster_labels,
                utterance_labels=tuple(
                    u if u is not None and u.source == "cluster" else None
                    for u in base.utterance_labels
                ),
            )
            result = propagate_labels(classifier, self.dataset, fresh, threshold)
            self.propagated = {
                i: result.utterance_labels[i]
                for i in result.labeled_indices("propagated")
            }
            per_intent: dict[str, int] = {}
            for u in self.propagated.values():
                per_intent[u.intent] = per_intent.get(u.intent, 0) + 1
            summary = {
                "propagated": len(self.propagated),
                "remaining_unlabeled": self.progress()["unlabeled"],
                "per_intent": dict(sorted(per_intent.items())),
                "threshold": threshold,
            }
            self.audit.append({
                "ts": utc_now(), "action": "propagate",
                "threshold": threshold, "propagated": summary["propagated"],
            })
            self._save()
            return summary


class LabelRequest(BaseModel):
    intent: str


class PropagateRequest(BaseModel):
    threshold: float = Field(
        default=DEFAULT_CONFIDENCE_THRESHOLD, ge=0.0, le=1.0
    )


def create_app(session: SessionStore | None) -> FastAPI:
    app = FastAPI(title="iterintent labeling service")
    # The UI is served from a different local port; this is a single-user
    # local tool, so any origin may talk to it.
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.session = session

    def require_session() -> SessionStore:
        if app.state.session is None:
            raise HTTPException(status_code=409, detail="no session loaded")
        return app.state.session

    def require_cluster(store: SessionStore, cluster_id: int) -> None:
        if not 0 <= cluster_id < store.assignment.num_clusters:
            raise HTTPException(status_code=404, detail=f"unknown cluster {cluster_id}")

    @app.get("/clusters")
    def get_clusters() -> list[dict]:
        return require_session().summaries()

    @app.get("/clusters/{cluster_id}/members")
    def get_members(cluster_id: int, page: int = 0, page_size: int = 50) -> dict:
        store = require_session()
        require_cluster(store, cluster_id)
        if page < 0 or page_size < 1:
            raise HTTPException(status_code=422, detail="bad paging parameters")
        members = store.assignment.members_of(cluster_id)
        window = members[page * page_size:(page + 1) * page_size]
        return {
            "cluster": cluster_id,
            "page": page,
            "page_size": page_size,
            "total": int(members.size),
            "members": [
                {"id": store.dataset.records[int(i)].id,
                 "text": store.dataset.records[int(i)].text}
                for i in window
            ],
        }

    @app.post("/clusters/{cluster_id}/label")
    def post_label(cluster_id: int, body: LabelRequest) -> dict:
        store = require_session()
        require_cluster(store, cluster_id)
        intent = body.intent.strip()
        if not intent:
            raise HTTPException(status_code=422, detail="intent must be non-empty")
        return store.label_cluster(cluster_id, intent)

    @app.post("/propagate")
    def post_propagate(body: PropagateRequest) -> dict:
        store = require_session()
        try:
            return store.run_propagation(body.threshold)
        except TooFewClasses as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from exc

    @app.get("/progress")
    def get_progress() -> dict:
        return require_session().progress()

    @app.get("/export")
    def get_export() -> PlainTextResponse:
        store = require_session()
        corpus = export_training_data(store.dataset, store.label_state())
        lines = [
            json.dumps({
                "id": row.id, "text": row.text, "intent": row.intent,
                "confidence": row.confidence, "source": row.source,
            })
            for row in corpus.labeled
        ]
        body = "\n".join(lines) + ("\n" if lines else "")
        return PlainTextResponse(content=body, media_type="application/x-ndjson")

    return app
