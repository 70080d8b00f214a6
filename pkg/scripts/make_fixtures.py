#!/usr/bin/env python3
"""Regenerate the bundled fixture datasets (deterministic).

The embedding geometry is synthetic: each intent is a few tight directional
blobs plus a slice of loose points, so density clustering has real work to
do (sub-intents, residual noise) while texts stay human-readable.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

SCHEDULE_TEMPLATES = [
    "when does the next {vehicle} leave from {place}",
    "what time does the {vehicle} depart {place}",
    "next departure from {place} please",
    "is there a {vehicle} leaving {place} soon",
    "departure time for the {vehicle} at {place}",
]
CONNECTION_TEMPLATES = [
    "how do i get from {a} to {b}",
    "find me a connection from {a} to {b}",
    "best route between {a} and {b}",
    "i need to travel from {a} to {b}",
    "which {vehicle} takes me from {a} to {b}",
]
PLACES = ["central station", "airport", "harbor", "old town", "university",
          "market square", "stadium", "city hall", "museum", "east terminal"]
VEHICLES = ["bus", "tram", "train", "ferry"]


def blob_points(rng, center, size, spread):
    return center + spread * rng.normal(size=(size, center.shape[0]))


def build_dataset(rng, dim, intent_blobs, loose_fraction=0.1):
    """intent_blobs: list of (intent, [blob sizes]). Returns (vectors, intents)."""
    total_blobs = sum(len(sizes) for _, sizes in intent_blobs)
    q, _ = np.linalg.qr(rng.normal(size=(dim, total_blobs)))
    centers = iter(q.T)
    vectors, intents = [], []
    for intent, sizes in intent_blobs:
        for size in sizes:
            center = next(centers)
            n_loose = int(round(size * loose_fraction))
            pts = np.concatenate([
                blob_points(rng, center, size - n_loose, spread=0.03),
                blob_points(rng, center, n_loose, spread=0.25),
            ])
            vectors.extend(pts)
            intents.extend([intent] * size)
    return np.array(vectors), intents


def render_text(rng, intent):
    if intent == "schedule_inquiry":
        template = SCHEDULE_TEMPLATES[rng.integers(len(SCHEDULE_TEMPLATES))]
    else:
        template = CONNECTION_TEMPLATES[rng.integers(len(CONNECTION_TEMPLATES))]
    a, b = rng.choice(len(PLACES), size=2, replace=False)
    return template.format(
        vehicle=VEHICLES[rng.integers(len(VEHICLES))],
        place=PLACES[rng.integers(len(PLACES))],
        a=PLACES[a], b=PLACES[b],
    )


def write_fixture(path, vectors, intents, rng, decimals=6):
    order = np.arange(len(vectors))
    rng.shuffle(order)
    with open(path, "w", encoding="utf-8") as fh:
        for pos, i in enumerate(order.tolist()):
            fh.write(json.dumps({
                "id": f"u{pos:05d}",
                "text": render_text(rng, intents[i]),
                "embedding": [round(float(v), decimals) for v in vectors[i]],
                "label": intents[i],
            }) + "\n")
    print(f"wrote {path} ({len(vectors)} records)")


def main() -> None:
    FIXTURES.mkdir(exist_ok=True)

    rng = np.random.default_rng(20240615)
    vectors, intents = build_dataset(rng, dim=32, intent_blobs=[
        ("schedule_inquiry", [60, 40, 28]),     # 128 utterances
        ("connection_search", [48, 30]),        # 78 utterances
    ])
    write_fixture(FIXTURES / "chatbot_206.jsonl", vectors, intents, rng)

    rng = np.random.default_rng(777)
    vectors, intents = build_dataset(rng, dim=16, intent_blobs=[
        ("schedule_inquiry", [60]),
        ("connection_search", [40]),
    ], loose_fraction=0.0)
    write_fixture(FIXTURES / "ui_fixture_100.jsonl", vectors, intents, rng)


if __name__ == "__main__":
    main()
