"""Synthetic labeled stream generator for tests and acceptance runs.

Each synthetic topic draws its tokens from a vocabulary disjoint from all
other topics, so the hashed embedder separates topics near-orthogonally.
Topic activity is placed in contiguous slot ranges, mimicking event-style
streams, and a matching ground-truth file is emitted alongside.
"""

from __future__ import annotations

import json
import random
import string
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone

from streamtopics.ingest import format_timestamp

DEFAULT_START = datetime(2020, 5, 5, 16, 0, 0, tzinfo=timezone.utc)
TOKENS_PER_TEXT = 8


@dataclass
class SyntheticStream:
    records: list[dict]  # {"id", "text", "timestamp"} in stream order
    gt_slots: dict[int, list[dict]]  # slot -> [{"name", "keywords"}]


def _make_vocab(rng: random.Random, n_topics: int, vocab_per_topic: int) -> list[list[str]]:
    seen: set[str] = set()
    vocabs = []
    for _ in range(n_topics):
        vocab = []
        while len(vocab) < vocab_per_topic:
            word = "".join(rng.choice(string.ascii_lowercase) for _ in range(7))
            if word not in seen:
                seen.add(word)
                vocab.append(word)
        vocabs.append(vocab)
    return vocabs


def generate(
    n_topics: int,
    points_per_topic: int,
    vocab_per_topic: int,
    slots: int,
    seed: int,
    slot_seconds: int = 60,
    start: datetime = DEFAULT_START,
) -> SyntheticStream:
    """Build a timestamped stream plus its ground truth.

    Topic t is active in slot t*slots//n_topics; its points are spread
    evenly across that slot and interleaved with the other topics active
    there. Texts are TOKENS_PER_TEXT draws (with replacement) from the
    topic vocabulary; the ground-truth keywords are the full vocabulary.
    """
    if min(n_topics, points_per_topic, vocab_per_topic, slots) < 1:
        raise ValueError("all generator arguments must be positive")
    rng = random.Random(seed)
    vocabs = _make_vocab(rng, n_topics, vocab_per_topic)

    gt_slots: dict[int, list[dict]] = {}
    raw: list[tuple[datetime, int, int, str]] = []
    for t in range(n_topics):
        slot = t * slots // n_topics
        gt_slots.setdefault(slot, []).append({"name": f"topic-{t}", "keywords": list(vocabs[t])})
        for i in range(points_per_topic):
            offset = slot * slot_seconds + (i * slot_seconds) // points_per_topic
            ts = start + timedelta(seconds=offset)
            text = " ".join(rng.choices(vocabs[t], k=TOKENS_PER_TEXT))
            raw.append((ts, t, i, text))

    raw.sort(key=lambda r: (r[0], r[1], r[2]))
    records = [
        {"id": f"r{n:05d}", "text": text, "timestamp": format_timestamp(ts)}
        for n, (ts, _, _, text) in enumerate(raw)
    ]
    return SyntheticStream(records=records, gt_slots=gt_slots)


def write_stream(stream: SyntheticStream, stream_path: str, gt_path: str) -> None:
    with open(stream_path, "w", encoding="utf-8") as fh:
        for record in stream.records:
            fh.write(json.dumps(record, separators=(",", ":")) + "\n")
    with open(gt_path, "w", encoding="utf-8") as fh:
        payload = {"slots": {str(slot): topics for slot, topics in sorted(stream.gt_slots.items())}}
        json.dump(payload, fh, indent=2)
        fh.write("\n")
