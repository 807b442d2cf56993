"""Timeslot snapshots: agent ranking, keyword extraction, snapshot IO."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from datetime import datetime
from typing import Iterable, TextIO

from streamtopics.ingest import format_timestamp, parse_timestamp


@dataclass
class TopicEntry:
    agent_id: int
    size: int
    keywords: list[str]


@dataclass
class TimeslotSnapshot:
    """Ranked topics with top keywords for one completed timeslot."""

    slot_index: int
    slot_start: datetime
    slot_end: datetime
    topics: list[TopicEntry]

    def to_dict(self) -> dict:
        return {
            "slot": self.slot_index,
            "start": format_timestamp(self.slot_start),
            "end": format_timestamp(self.slot_end),
            "topics": [
                {"agent": t.agent_id, "size": t.size, "keywords": list(t.keywords)} for t in self.topics
            ],
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "TimeslotSnapshot":
        return cls(
            slot_index=obj["slot"],
            slot_start=parse_timestamp(obj["start"]),
            slot_end=parse_timestamp(obj["end"]),
            topics=[TopicEntry(t["agent"], t["size"], list(t["keywords"])) for t in obj["topics"]],
        )


def _keyword_counts(agent, stopwords: set[str]) -> Counter:
    counts: Counter = Counter()
    for member in agent.members:
        for token in member.tokens:
            if token not in stopwords:
                counts[token] += 1
    return counts


def extract_keywords(agent, no_keywords: int, stopwords: set[str]) -> list[str]:
    """Top tokens across current members by raw frequency.

    Stopwords are excluded; ties break lexicographically ascending. An
    agent holding only stopword tokens yields an empty list.
    """
    counts = _keyword_counts(agent, stopwords)
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return [token for token, _ in ranked[:no_keywords]]


def make_snapshot(
    agents: Iterable,
    slot_index: int,
    slot_start: datetime,
    slot_end: datetime,
    no_topics: int,
    no_keywords: int,
    stopwords: set[str],
    stats: Counter | None = None,
) -> TimeslotSnapshot:
    """Rank agents by window size (ties by id) and emit the top entries.

    ``stats`` optionally accumulates in-window term frequencies of every
    emitted keyword, feeding the per-run keyword totals file.
    """
    ranked = sorted((a for a in agents if a.size > 0), key=lambda a: (-a.size, a.agent_id))
    entries = []
    for agent in ranked[:no_topics]:
        counts = _keyword_counts(agent, stopwords)
        ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:no_keywords]
        entries.append(TopicEntry(agent.agent_id, agent.size, [tok for tok, _ in ordered]))
        if stats is not None:
            for tok, count in ordered:
                stats[tok] += count
    return TimeslotSnapshot(slot_index, slot_start, slot_end, entries)


def write_snapshot(fh: TextIO, snapshot: TimeslotSnapshot) -> None:
    fh.write(json.dumps(snapshot.to_dict(), separators=(",", ":")) + "\n")


def read_snapshots(path: str) -> list[TimeslotSnapshot]:
    snapshots = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                snapshots.append(TimeslotSnapshot.from_dict(json.loads(line)))
    return snapshots


def write_keyword_stats(path: str, stats: Counter) -> None:
    """Per-run keyword frequency totals, most frequent first."""
    with open(path, "w", encoding="utf-8") as fh:
        for token, count in sorted(stats.items(), key=lambda kv: (-kv[1], kv[0])):
            fh.write(json.dumps({"keyword": token, "count": count}) + "\n")
